#include <doctest.h>

#include <cmath>
#include <random>

#include "mlergm/exchange.hpp"
#include "reference.hpp"

using namespace mlergm;

namespace {

struct SmallProblem {
  LayerStack stack;
  NodeAttributes attrs;
  std::vector<StatisticList> models;
  HyperPriors priors;
};

SmallProblem small_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SmallProblem p;
  p.stack = decompose(WeightedSignedNetwork(ref::random_weights(10, 3, 0.6, rng)), {2.0, 3.0});
  p.attrs = ref::random_party(10, rng);
  p.models = {ref::senate_model(0.5), ref::senate_model(0.3)};
  p.priors = HyperPriors::isotropic(5, 4.0, 12.0, 1.0);
  return p;
}

McmcConfig short_run() {
  McmcConfig c;
  c.iterations = 120;
  c.t_start = 20;
  c.adapt_every = 10;
  c.aux_iters = 200;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_SUITE("exchange") {
  TEST_CASE("adapt_gamma examples") {
    CHECK(adapt_gamma(1.0, 1.0, 0.2, 0.234) == doctest::Approx(1.2));
    CHECK(adapt_gamma(1.0, 0.0, 0.2, 0.234) == doctest::Approx(0.8));
    LayerAdapt a;
    a.gamma = 1.0;
    a.window_proposals = 10;
    a.window_accepts = 5;
    adapt(a, 0.2, 0.234);
    CHECK(a.gamma == doctest::Approx(1.2));
    CHECK(a.window_proposals == 0);
    CHECK(a.window_accepts == 0);
  }

  TEST_CASE("a zero-length proposal has log alpha 0 and is accepted") {
    const HyperState h{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)};
    const Eigen::VectorXd phi = Eigen::VectorXd::Random(3);
    CHECK(exchange_log_alpha(phi, phi, Eigen::VectorXd::Random(3), Eigen::VectorXd::Random(3), h) == 0.0);
    LayerAdapt zero;
    zero.gamma = 1e-9;
    zero.B = Eigen::MatrixXd::Identity(3, 3);
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
      // auxiliary stats equal to the observed ones leave a ratio of order gamma
      const auto r = exchange_step(phi, h, zero, Eigen::VectorXd::Ones(3),
                                   [](const Eigen::VectorXd&, Rng&) { return StatVector(Eigen::VectorXd::Ones(3)); }, rng);
      CHECK(std::abs(r.log_alpha) < 1e-7);
      CHECK(r.accepted);
    }
  }

  TEST_CASE("equal auxiliary statistics leave only the prior ratio") {
    const HyperState h{Eigen::VectorXd::Constant(2, 0.5), 2.0 * Eigen::MatrixXd::Identity(2, 2)};
    const Eigen::VectorXd phi = Eigen::VectorXd::Random(2), prop = Eigen::VectorXd::Random(2);
    const StatVector s = Eigen::VectorXd::Random(2);
    CHECK(exchange_log_alpha(phi, prop, s, s, h) == doctest::Approx(log_prior(prop, h) - log_prior(phi, h)));
  }

  TEST_CASE("the likelihood term of the acceptance ratio matches the flat-prior exchange ratio") {
    const HyperState wide{Eigen::VectorXd::Zero(2), 1e12 * Eigen::MatrixXd::Identity(2, 2)};
    const Eigen::VectorXd phi = Eigen::VectorXd::Random(2), prop = Eigen::VectorXd::Random(2);
    const StatVector aux = Eigen::VectorXd::Random(2), obs = Eigen::VectorXd::Random(2);
    const double flat = (prop - phi).dot(obs) - (prop - phi).dot(aux);
    CHECK(exchange_log_alpha(phi, prop, aux, obs, wide) == doctest::Approx(flat).epsilon(1e-9));
  }

  TEST_CASE("T = 0 stores only the initial state") {
    auto p = small_problem(51);
    McmcConfig c = short_run();
    c.iterations = 0;
    const Chain chain = fit(p.stack, p.attrs, p.models, p.priors, c);
    REQUIRE(chain.size() == 1);
    CHECK(chain.iterations[0] == 0);
    CHECK(chain.phi[0].rows() == 2);
    CHECK(chain.mu[0] == p.priors.mu0);
    CHECK(chain.phi[0].cwiseAbs().maxCoeff() < 1.0);
  }

  TEST_CASE("fit is bit-reproducible and threads do not change the result") {
    auto p = small_problem(52);
    McmcConfig c = short_run();
    const Chain a = fit(p.stack, p.attrs, p.models, p.priors, c);
    const Chain b = fit(p.stack, p.attrs, p.models, p.priors, c);
    c.threads = 2;
    const Chain par = fit(p.stack, p.attrs, p.models, p.priors, c);
    REQUIRE(a.size() == c.iterations + 1);
    for (std::size_t t = 0; t < a.size(); ++t) {
      CHECK(a.phi[t] == b.phi[t]);
      CHECK(a.phi[t] == par.phi[t]);
      CHECK(a.Sigma[t] == par.Sigma[t]);
      CHECK(a.gamma[t] == par.gamma[t]);
    }
    CHECK(a.fingerprint == b.fingerprint);
  }

  TEST_CASE("stored covariances are PD and gamma stays positive") {
    auto p = small_problem(53);
    const Chain chain = fit(p.stack, p.attrs, p.models, p.priors, short_run());
    for (std::size_t t = 0; t < chain.size(); ++t) {
      CHECK(is_spd(chain.Sigma[t]));
      CHECK(chain.gamma[t].minCoeff() > 0.0);
    }
    CHECK(chain.stat_labels.size() == 5);
    CHECK(chain.layer_ids == std::vector<int>{2, 3});
  }

  TEST_CASE("gamma changes only at active checkpoints") {
    auto p = small_problem(54);
    McmcConfig c = short_run();
    c.iterations = 200;
    c.t_start = 40;
    c.adapt_every = 20;
    c.adapt_stop = 100;
    const Chain chain = fit(p.stack, p.attrs, p.models, p.priors, c);
    for (std::size_t t = 1; t < chain.size(); ++t) {
      const bool changed = chain.gamma[t] != chain.gamma[t - 1];
      const std::size_t it = chain.iterations[t];
      const bool checkpoint = it >= 40 && it <= 100 && it % 20 == 0;
      if (changed) CHECK(checkpoint);
      if (checkpoint) CHECK(changed);
    }
  }

  TEST_CASE("thinning stores every thin-th iteration") {
    auto p = small_problem(55);
    McmcConfig c = short_run();
    c.thin = 7;
    const Chain chain = fit(p.stack, p.attrs, p.models, p.priors, c);
    CHECK(chain.size() == 1 + c.iterations / 7);
    for (std::size_t t = 1; t < chain.size(); ++t) CHECK(chain.iterations[t] % 7 == 0);
  }

  TEST_CASE("non-conformable statistic lists are rejected before sampling") {
    auto p = small_problem(56);
    p.models[1].pop_back();
    CHECK_THROWS_AS(fit(p.stack, p.attrs, p.models, p.priors, short_run()), std::invalid_argument);
    p = small_problem(56);
    p.models.pop_back();
    CHECK_THROWS_AS(fit(p.stack, p.attrs, p.models, p.priors, short_run()), std::invalid_argument);
    p = small_problem(56);
    p.models[1][0].kind = StatKind::EdgesNeg;
    CHECK_THROWS_AS(fit(p.stack, p.attrs, p.models, p.priors, short_run()), std::invalid_argument);
    p = small_problem(56);
    p.priors.S0(0, 0) = -3.0;
    CHECK_THROWS_AS(fit(p.stack, p.attrs, p.models, p.priors, short_run()), std::invalid_argument);
  }

  TEST_CASE("transition data for a three-layer stack") {
    const auto p = small_problem(57);
    const auto data = transition_data(p.stack);
    REQUIRE(data.size() == 2);
    CHECK_FALSE(data[0].inherited.has_value());
    CHECK(data[1].inherited.has_value());
    CHECK(data[1].support == p.stack.layer(2));
  }
}
