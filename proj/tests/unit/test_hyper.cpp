#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlergm/hyper.hpp"

using namespace mlergm;

TEST_SUITE("hyper") {
  TEST_CASE("log_prior at the mean and under a scaled covariance") {
    const Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    const double at_mean = log_prior(mu, {mu, Eigen::MatrixXd::Identity(5, 5)});
    CHECK(at_mean == doctest::Approx(-2.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
    const double doubled = log_prior(mu, {mu, 2.0 * Eigen::MatrixXd::Identity(5, 5)});
    CHECK(at_mean - doubled == doctest::Approx(2.5 * std::log(2.0)).epsilon(1e-13));
  }

  TEST_CASE("log_prior matches a dense-inverse evaluation") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 6);
      const Eigen::MatrixXd a = Eigen::MatrixXd::Random(p, p);
      const Eigen::MatrixXd sigma = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(p, p);
      const Eigen::VectorXd mu = Eigen::VectorXd::Random(p);
      const Eigen::VectorXd x = Eigen::VectorXd::Random(p) * 3.0;
      const Eigen::VectorXd r = x - mu;
      const double want = -0.5 * (static_cast<double>(p) * std::log(2.0 * std::numbers::pi) +
                                  std::log(sigma.determinant()) + r.dot(sigma.inverse() * r));
      CHECK(std::abs(log_prior(x, {mu, sigma}) - want) < 1e-10);
    }
  }

  TEST_CASE("log_prior rejects non-PD covariance") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(1, 1) = -1.0;
    CHECK_THROWS_AS(log_prior(Eigen::VectorXd::Zero(2), {Eigen::VectorXd::Zero(2), bad}), std::domain_error);
  }

  TEST_CASE("worked conditional: Sigma_mu = 4/13 I, mean 12/13 phibar") {
    const auto priors = HyperPriors::isotropic(5, 4.0, 12.0, 1.0);
    Eigen::MatrixXd phis(3, 5);
    phis << 1, 2, 3, 4, 5, -1, 0, 2, 1, 1, 0.5, 0.5, 0.5, 0.5, 0.5;
    const auto c = mu_conditional(phis, Eigen::MatrixXd::Identity(5, 5), priors);
    CHECK((c.cov - (4.0 / 13.0) * Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::VectorXd phibar = phis.colwise().mean().transpose();
    CHECK((c.mean - (12.0 / 13.0) * phibar).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("no blocks returns the prior") {
    const auto priors = HyperPriors::isotropic(3, 4.0, 12.0, 1.0);
    const auto c = mu_conditional(Eigen::MatrixXd(0, 3), Eigen::MatrixXd::Identity(3, 3), priors);
    CHECK(c.mean == priors.mu0);
    CHECK(c.cov == priors.Sigma0);
    const auto iw = sigma_conditional(Eigen::MatrixXd(0, 3), Eigen::VectorXd::Zero(3), priors);
    CHECK(iw.nu == 12.0);
    CHECK(iw.scale == priors.S0);
  }

  TEST_CASE("sigma conditional parameters") {
    const auto priors = HyperPriors::isotropic(2, 4.0, 5.0, 1.0);
    Eigen::MatrixXd phis(2, 2);
    phis << 1, 0, 0, 2;
    const auto iw = sigma_conditional(phis, Eigen::VectorXd::Zero(2), priors);
    CHECK(iw.nu == 7.0);
    Eigen::MatrixXd want(2, 2);
    want << 2, 0, 0, 5;
    CHECK(iw.scale.isApprox(want));
  }

  TEST_CASE("gibbs sweep moments (short run)") {
    const auto priors = HyperPriors::isotropic(2, 4.0, 12.0, 1.0);
    Eigen::MatrixXd phis(3, 2);
    phis << 1.0, -0.5, 0.2, 0.3, 0.8, 0.1;
    const Eigen::MatrixXd Sigma = Eigen::MatrixXd::Identity(2, 2);
    const auto c = mu_conditional(phis, Sigma, priors);
    Rng rng(42);
    const int n = 20000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
    for (int t = 0; t < n; ++t) sum += gibbs_hyper(phis, Sigma, priors, rng).mu;
    const Eigen::VectorXd mean = sum / n;
    for (int d = 0; d < 2; ++d) CHECK(std::abs(mean(d) - c.mean(d)) < 4.0 * std::sqrt(c.cov(d, d) / n));
  }

  TEST_CASE("inverse Wishart draws match the analytic mean") {
    Eigen::MatrixXd S(2, 2);
    S << 2.0, 0.3, 0.3, 1.0;
    const InverseWishartParams iw{9.0, S};
    Rng rng(43);
    const int n = 40000;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
    for (int t = 0; t < n; ++t) sum += sample_inverse_wishart(iw.nu, iw.scale, rng);
    const Eigen::MatrixXd mean = sum / n;
    const Eigen::MatrixXd want = inverse_wishart_mean(iw);
    const Eigen::MatrixXd var = inverse_wishart_variance(iw);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(mean(i, j) - want(i, j)) < 4.0 * std::sqrt(var(i, j) / n));
    CHECK(want.isApprox(S / (9.0 - 3.0)));
  }

  TEST_CASE("prior validation") {
    auto priors = HyperPriors::isotropic(3, 4.0, 12.0, 1.0);
    CHECK_NOTHROW(priors.check());
    priors.nu0 = 1.5;
    CHECK_THROWS_AS(priors.check(), std::invalid_argument);
    priors = HyperPriors::isotropic(3, 4.0, 12.0, 1.0);
    priors.S0(0, 0) = -1.0;
    CHECK_THROWS_AS(priors.check(), std::invalid_argument);
    priors = HyperPriors::isotropic(3, 4.0, 12.0, 1.0);
    priors.mu0 = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(priors.check(), std::invalid_argument);
  }

  TEST_CASE("hyperprior draws are PD") {
    const auto priors = HyperPriors::isotropic(5, 4.0, 12.0, 1.0);
    Rng rng(44);
    for (int t = 0; t < 200; ++t) CHECK(is_spd(sample_hyperprior(priors, rng).Sigma));
  }
}
