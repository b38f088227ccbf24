#include "mlergm/exchange.hpp"

#include <future>
#include <sstream>
#include <stdexcept>

#include "mlergm/hash.hpp"
#include "mlergm/layer_state.hpp"
#include "mlergm/sampler.hpp"

namespace mlergm {

void McmcConfig::check() const {
  if (thin == 0) throw std::invalid_argument("mcmc: thin must be positive");
  if (adapt_every == 0) throw std::invalid_argument("mcmc: adapt_every must be positive");
  if (aux_iters == 0) throw std::invalid_argument("mcmc: aux_iters must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("mcmc: lambda must lie in (0, 1)");
  if (!(a_target > 0.0 && a_target < 1.0)) throw std::invalid_argument("mcmc: a_target must lie in (0, 1)");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("mcmc: gamma0 must be positive");
  if (threads == 0) throw std::invalid_argument("mcmc: threads must be positive");
}

double adapt_gamma(double gamma, double rate, double lambda, double a_target) {
  return rate > a_target ? gamma * (1.0 + lambda) : gamma * (1.0 - lambda);
}

void adapt(LayerAdapt& layer, double lambda, double a_target) {
  layer.gamma = adapt_gamma(layer.gamma, layer.window_rate(), lambda, a_target);
  layer.window_proposals = 0;
  layer.window_accepts = 0;
}

double exchange_log_alpha(const Eigen::VectorXd& phi, const Eigen::VectorXd& proposal, const StatVector& aux_stats,
                          const StatVector& observed, const HyperState& hyper) {
  return (phi - proposal).dot(aux_stats - observed) + log_prior(proposal, hyper) - log_prior(phi, hyper);
}

ExchangeResult exchange_step(const Eigen::VectorXd& phi, const HyperState& hyper, const LayerAdapt& adapt,
                             const StatVector& observed, const AuxSimulator& simulate, Rng& rng) {
  const Eigen::MatrixXd proposal_cov = adapt.gamma * adapt.gamma * adapt.B;
  Eigen::VectorXd proposal = sample_mvn(phi, proposal_cov, rng);
  const StatVector aux = simulate(proposal, rng);
  ExchangeResult out;
  out.log_alpha = exchange_log_alpha(phi, proposal, aux, observed, hyper);
  out.accepted = std::log(uniform01(rng)) < out.log_alpha;
  out.phi = out.accepted ? std::move(proposal) : phi;
  return out;
}

Eigen::VectorXd Chain::acceptance_rates() const {
  Eigen::VectorXd rates = Eigen::VectorXd::Zero(n_blocks());
  for (Eigen::Index j = 0; j < n_blocks(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (idx < total_proposals.size() && total_proposals[idx] > 0)
      rates(j) = static_cast<double>(total_accepts[idx]) / static_cast<double>(total_proposals[idx]);
  }
  return rates;
}

namespace {

struct RunningCovariance {
  Eigen::VectorXd sum;
  Eigen::MatrixXd outer;
  std::size_t count = 0;

  void add(const Eigen::VectorXd& x) {
    if (count == 0) {
      sum = Eigen::VectorXd::Zero(x.size());
      outer = Eigen::MatrixXd::Zero(x.size(), x.size());
    }
    sum += x;
    outer += x * x.transpose();
    ++count;
  }
  Eigen::MatrixXd covariance() const {
    const double n = static_cast<double>(count);
    const Eigen::VectorXd mean = sum / n;
    return (outer - n * mean * mean.transpose()) / (n - 1.0);
  }
};

}  // namespace

Chain run_exchange(const std::vector<ExchangeTarget>& targets, std::vector<std::string> stat_labels,
                   const HyperPriors& priors, const McmcConfig& config) {
  config.check();
  priors.check();
  const auto M = static_cast<Eigen::Index>(targets.size());
  const auto p = priors.dim();
  if (static_cast<Eigen::Index>(stat_labels.size()) != p)
    throw std::invalid_argument("run_exchange: label count differs from the prior dimension");
  for (const auto& t : targets)
    if (t.observed.size() != p) throw std::invalid_argument("run_exchange: observed statistics of the wrong length");

  Chain chain;
  chain.stat_labels = std::move(stat_labels);
  for (const auto& t : targets) chain.layer_ids.push_back(t.k);
  chain.seed = config.seed;
  chain.total_proposals.assign(static_cast<std::size_t>(M), 0);
  chain.total_accepts.assign(static_cast<std::size_t>(M), 0);

  Rng init_rng(derive_seed(config.seed, 0));
  Rng hyper_rng(derive_seed(config.seed, 1));
  std::vector<Rng> layer_rngs;
  for (Eigen::Index j = 0; j < M; ++j) layer_rngs.emplace_back(derive_seed(config.seed, 100 + static_cast<std::uint64_t>(j)));

  Eigen::MatrixXd phis(M, p);
  const Eigen::MatrixXd init_cov = 0.01 * Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index j = 0; j < M; ++j)
    phis.row(j) = sample_mvn(Eigen::VectorXd::Zero(p), init_cov, init_rng).transpose();
  HyperState hyper{priors.mu0, sample_inverse_wishart(priors.nu0, priors.S0, init_rng)};

  std::vector<LayerAdapt> adapt_state(static_cast<std::size_t>(M));
  for (auto& a : adapt_state) {
    a.gamma = config.gamma0;
    a.B = Eigen::MatrixXd::Identity(p, p);
  }
  std::vector<RunningCovariance> history(static_cast<std::size_t>(M));
  std::vector<std::uint8_t> last_accept(static_cast<std::size_t>(M), 0);

  auto store = [&](std::size_t t) {
    chain.iterations.push_back(t);
    chain.phi.push_back(phis);
    chain.mu.push_back(hyper.mu);
    chain.Sigma.push_back(hyper.Sigma);
    chain.accepted.push_back(last_accept);
    Eigen::VectorXd g(M);
    for (Eigen::Index j = 0; j < M; ++j) g(j) = adapt_state[static_cast<std::size_t>(j)].gamma;
    chain.gamma.push_back(std::move(g));
  };
  store(0);

  auto update_layer = [&](Eigen::Index j) {
    const auto idx = static_cast<std::size_t>(j);
    const Eigen::VectorXd current = phis.row(j).transpose();
    return exchange_step(current, hyper, adapt_state[idx], targets[idx].observed, targets[idx].simulate,
                         layer_rngs[idx]);
  };

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    std::vector<ExchangeResult> results(static_cast<std::size_t>(M));
    if (config.threads > 1 && M > 1) {
      for (Eigen::Index start = 0; start < M; start += config.threads) {
        std::vector<std::future<ExchangeResult>> jobs;
        const Eigen::Index stop = std::min<Eigen::Index>(M, start + config.threads);
        for (Eigen::Index j = start; j < stop; ++j) jobs.push_back(std::async(std::launch::async, update_layer, j));
        for (Eigen::Index j = start; j < stop; ++j) results[static_cast<std::size_t>(j)] = jobs[static_cast<std::size_t>(j - start)].get();
      }
    } else {
      for (Eigen::Index j = 0; j < M; ++j) results[static_cast<std::size_t>(j)] = update_layer(j);
    }
    for (Eigen::Index j = 0; j < M; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      auto& r = results[idx];
      phis.row(j) = r.phi.transpose();
      last_accept[idx] = r.accepted;
      adapt_state[idx].window_proposals += 1;
      adapt_state[idx].window_accepts += r.accepted;
      chain.total_proposals[idx] += 1;
      chain.total_accepts[idx] += r.accepted;
      if (config.refresh_proposal_cov) history[idx].add(r.phi);
    }

    if (t % config.adapt_every == 0) {
      const bool active = t >= config.t_start && (config.continuous_adaptation || t <= config.effective_adapt_stop());
      for (Eigen::Index j = 0; j < M; ++j) {
        auto& a = adapt_state[static_cast<std::size_t>(j)];
        if (active) {
          if (config.refresh_proposal_cov && history[static_cast<std::size_t>(j)].count > static_cast<std::size_t>(2 * p)) {
            Eigen::MatrixXd cov = history[static_cast<std::size_t>(j)].covariance();
            cov.diagonal().array() += 1e-8;
            if (is_spd(cov)) a.B = cov;
          }
          adapt(a, config.lambda, config.a_target);
        } else {
          a.window_proposals = 0;
          a.window_accepts = 0;
        }
      }
    }

    hyper = gibbs_hyper(phis, hyper.Sigma, priors, hyper_rng, &chain.jitter_events);
    if (t % config.thin == 0) store(t);
  }
  return chain;
}

std::vector<TransitionData> transition_data(const LayerStack& stack) {
  require_valid(stack);
  std::vector<TransitionData> out;
  for (int k = 2; k <= stack.n_layers(); ++k) {
    TransitionData d;
    d.k = k;
    d.support = stack.layer(k - 1);
    if (k >= 3) d.inherited = signed_entries(stack, k - 1);
    d.observed = signed_entries(stack, k);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LayerModel> bind_models(const std::vector<StatisticList>& models, const NodeAttributes& attributes,
                                    int n_nodes, int n_layers) {
  if (static_cast<int>(models.size()) != n_layers - 1)
    throw std::invalid_argument("need one statistic list per transition (K - 1 = " + std::to_string(n_layers - 1) +
                                "), got " + std::to_string(models.size()));
  std::vector<LayerModel> out;
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m].size() != models.front().size())
      throw std::invalid_argument("statistic lists differ in length across layers");
    for (std::size_t s = 0; s < models[m].size(); ++s)
      if (models[m][s].label() != models.front()[s].label())
        throw std::invalid_argument("statistic " + std::to_string(s) + " differs across layers: " +
                                    models[m][s].label() + " vs " + models.front()[s].label());
    out.emplace_back(models[m], attributes, n_nodes);
  }
  return out;
}

namespace {

std::string fingerprint_of(const LayerStack& stack, const std::vector<StatisticList>& models,
                           const HyperPriors& priors, const McmcConfig& config) {
  std::ostringstream text;
  text.precision(17);
  text << stack.n_nodes() << ' ' << stack.n_layers() << '\n';
  for (int k = 1; k <= stack.n_layers(); ++k) text << stack.layer(k).cast<int>() << '\n';
  text << stack.signs.cast<int>() << '\n';
  for (const auto& m : models)
    for (const auto& s : m) text << s.label() << ' ' << s.alpha << ';';
  text << priors.mu0.transpose() << '\n' << priors.Sigma0 << '\n' << priors.nu0 << '\n' << priors.S0 << '\n';
  text << config.iterations << ' ' << config.t_start << ' ' << config.adapt_every << ' ' << config.lambda << ' '
       << config.a_target << ' ' << config.aux_iters << ' ' << config.thin << ' ' << config.seed << ' '
       << config.gamma0 << ' ' << config.effective_adapt_stop() << ' ' << config.continuous_adaptation << ' '
       << config.refresh_proposal_cov;
  return hex64(fnv1a64(text.str()));
}

}  // namespace

Chain fit(const LayerStack& stack, const NodeAttributes& attributes, const std::vector<StatisticList>& models,
          const HyperPriors& priors, const McmcConfig& config) {
  config.check();
  priors.check();
  const auto data = transition_data(stack);
  const auto bound = bind_models(models, attributes, stack.n_nodes(), stack.n_layers());
  if (bound.front().size() != priors.dim())
    throw std::invalid_argument("prior dimension differs from the statistic count");

  std::vector<TransitionSampler> samplers;
  std::vector<LayerState> observed_states;
  samplers.reserve(data.size());
  observed_states.reserve(data.size());
  for (std::size_t m = 0; m < data.size(); ++m) {
    samplers.emplace_back(bound[m], data[m].support, data[m].inherited);
    observed_states.emplace_back(bound[m], data[m].observed);
  }

  std::vector<ExchangeTarget> targets;
  for (std::size_t m = 0; m < data.size(); ++m) {
    ExchangeTarget target;
    target.k = data[m].k;
    target.observed = observed_states[m].stats();
    const TransitionSampler* sampler = &samplers[m];
    const LayerState* start = &observed_states[m];
    const std::size_t aux_iters = config.aux_iters;
    target.simulate = [sampler, start, aux_iters](const Eigen::VectorXd& phi, Rng& rng) {
      LayerState state = *start;
      sampler->run(state, phi, aux_iters, rng);
      return StatVector(state.stats());
    };
    targets.push_back(std::move(target));
  }
  Chain chain = run_exchange(targets, bound.front().labels(), priors, config);
  chain.fingerprint = fingerprint_of(stack, models, priors, config);
  return chain;
}

}  // namespace mlergm
