#include "mlergm/predictive.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mlergm/diagnostics.hpp"
#include "mlergm/sampler.hpp"

namespace mlergm {

namespace {

Eigen::VectorXd histogram(const Eigen::VectorXi& deg, int n) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(std::max(n, 1));
  for (Eigen::Index v = 0; v < deg.size(); ++v) h(deg(v)) += 1.0;
  return h;
}

struct SimResult {
  std::vector<StatVector> stats;
  DegreeTally degrees;
  bool valid = true;
};

template <class Task>
std::vector<SimResult> run_simulations(std::size_t n_sims, unsigned threads, Task task) {
  std::vector<SimResult> out(n_sims);
  if (threads <= 1) {
    for (std::size_t s = 0; s < n_sims; ++s) out[s] = task(s);
    return out;
  }
  for (std::size_t start = 0; start < n_sims; start += threads) {
    std::vector<std::future<SimResult>> jobs;
    const std::size_t stop = std::min(n_sims, start + threads);
    for (std::size_t s = start; s < stop; ++s) jobs.push_back(std::async(std::launch::async, task, s));
    for (std::size_t s = start; s < stop; ++s) out[s] = jobs[s - start].get();
  }
  return out;
}

PredictiveEnsemble collect(std::vector<SimResult> sims, const std::vector<LayerModel>& models) {
  PredictiveEnsemble ensemble;
  ensemble.n_layers = static_cast<int>(models.size()) + 1;
  ensemble.stat_labels = models.front().labels();
  for (auto& s : sims) {
    ensemble.invalid_draws += !s.valid;
    ensemble.stats.push_back(std::move(s.stats));
    ensemble.degrees.push_back(std::move(s.degrees));
  }
  return ensemble;
}

SimResult simulate_one(const BinaryLayer& x1, const std::vector<LayerModel>& models,
                       const std::vector<Eigen::VectorXd>& phis, std::size_t aux_iters, std::uint64_t seed,
                       const LayerStack* warm_start) {
  SamplerConfig cfg;
  cfg.n_iters = aux_iters;
  cfg.seed = seed;
  auto draw = simulate_cascade(x1, models, phis, cfg, warm_start);
  SimResult r;
  r.valid = validate(draw.stack).empty();
  r.degrees = degree_tally(draw.stack);
  r.stats = std::move(draw.stats);
  return r;
}

}  // namespace

DegreeTally degree_tally(const LayerStack& stack) {
  const int n = stack.n_nodes();
  DegreeTally tally;
  const SignMatrix y1 = signed_entries(stack, 1);
  tally.positive = histogram(signed_degrees(y1, 1), n);
  tally.negative = histogram(signed_degrees(y1, -1), n);
  for (int k = 1; k <= stack.n_layers(); ++k) tally.layer.push_back(histogram(degrees(stack.layer(k)), n));
  return tally;
}

ObservedSummary observe(const LayerStack& stack, const std::vector<LayerModel>& models) {
  require_valid(stack);
  if (static_cast<int>(models.size()) != stack.n_layers() - 1)
    throw std::invalid_argument("observe: one model per transition is required");
  ObservedSummary out;
  for (int k = 2; k <= stack.n_layers(); ++k)
    out.stats.push_back(compute(models[static_cast<std::size_t>(k - 2)], signed_entries(stack, k), stack.layer(k - 1)));
  out.degrees = degree_tally(stack);
  return out;
}

PredictiveEnsemble prior_predictive(const BinaryLayer& x1, const std::vector<LayerModel>& models,
                                    const HyperPriors& priors, const PredictiveConfig& config,
                                    const LayerStack* warm_start) {
  priors.check();
  if (models.empty()) throw std::invalid_argument("prior_predictive: no transitions");
  auto task = [&](std::size_t s) {
    Rng rng(derive_seed(config.seed, 2 * s));
    const HyperState hyper = sample_hyperprior(priors, rng);
    std::vector<Eigen::VectorXd> phis;
    for (std::size_t m = 0; m < models.size(); ++m) phis.push_back(sample_mvn(hyper.mu, hyper.Sigma, rng));
    return simulate_one(x1, models, phis, config.aux_iters, derive_seed(config.seed, 2 * s + 1), warm_start);
  };
  auto ensemble = collect(run_simulations(config.n_sims, config.threads, task), models);
  return ensemble;
}

PredictiveEnsemble posterior_predictive(const std::vector<Eigen::MatrixXd>& phi_draws, const BinaryLayer& x1,
                                        const std::vector<LayerModel>& models, const PredictiveConfig& config,
                                        const LayerStack* warm_start) {
  if (phi_draws.empty()) throw std::invalid_argument("posterior_predictive: the chain is empty");
  if (models.empty()) throw std::invalid_argument("posterior_predictive: no transitions");
  for (const auto& d : phi_draws)
    if (d.rows() != static_cast<Eigen::Index>(models.size()) || d.cols() != models.front().size())
      throw std::invalid_argument("posterior_predictive: draw shape differs from the model");
  auto task = [&](std::size_t s) {
    Rng rng(derive_seed(config.seed, 2 * s));
    std::uniform_int_distribution<std::size_t> pick(0, phi_draws.size() - 1);
    const auto& draw = phi_draws[pick(rng)];
    std::vector<Eigen::VectorXd> phis;
    for (Eigen::Index m = 0; m < draw.rows(); ++m) phis.push_back(draw.row(m).transpose());
    return simulate_one(x1, models, phis, config.aux_iters, derive_seed(config.seed, 2 * s + 1), warm_start);
  };
  return collect(run_simulations(config.n_sims, config.threads, task), models);
}

GofReport gof_report(const PredictiveEnsemble& ensemble, const ObservedSummary& observed, std::string label) {
  if (ensemble.size() == 0) throw std::invalid_argument("gof_report: the ensemble is empty");
  GofReport report;
  report.label = std::move(label);
  report.n_sims = ensemble.size();
  report.degenerate = ensemble.size() == 1;

  auto band = [](std::vector<double> values, double obs, std::array<double, 5>& q) {
    q = report_quantiles(values);
    return obs >= q.front() && obs <= q.back();
  };

  const auto n_transitions = static_cast<int>(observed.stats.size());
  for (int m = 0; m < n_transitions; ++m) {
    for (std::size_t s = 0; s < ensemble.stat_labels.size(); ++s) {
      StatisticBand b;
      b.layer = m + 2;
      b.statistic = ensemble.stat_labels[s];
      b.observed = observed.stats[static_cast<std::size_t>(m)](static_cast<Eigen::Index>(s));
      std::vector<double> values;
      for (const auto& sim : ensemble.stats) values.push_back(sim[static_cast<std::size_t>(m)](static_cast<Eigen::Index>(s)));
      b.contained = band(std::move(values), b.observed, b.quantiles);
      report.statistics.push_back(std::move(b));
    }
  }

  auto degree_view = [&](const std::string& view, auto select) {
    const Eigen::VectorXd& obs = select(observed.degrees);
    Eigen::Index top = 0;
    for (Eigen::Index d = 0; d < obs.size(); ++d)
      if (obs(d) > 0) top = d;
    for (const auto& tally : ensemble.degrees) {
      const Eigen::VectorXd& h = select(tally);
      for (Eigen::Index d = 0; d < h.size(); ++d)
        if (h(d) > 0) top = std::max(top, d);
    }
    for (Eigen::Index d = 0; d <= top; ++d) {
      DegreeBand b;
      b.view = view;
      b.degree = static_cast<int>(d);
      b.observed = d < obs.size() ? obs(d) : 0.0;
      std::vector<double> values;
      for (const auto& tally : ensemble.degrees) {
        const Eigen::VectorXd& h = select(tally);
        values.push_back(d < h.size() ? h(d) : 0.0);
      }
      b.contained = band(std::move(values), b.observed, b.quantiles);
      report.degrees.push_back(std::move(b));
    }
  };
  degree_view("positive", [](const DegreeTally& t) -> const Eigen::VectorXd& { return t.positive; });
  degree_view("negative", [](const DegreeTally& t) -> const Eigen::VectorXd& { return t.negative; });
  for (std::size_t k = 1; k <= observed.degrees.layer.size(); ++k)
    degree_view("layer" + std::to_string(k),
                [k](const DegreeTally& t) -> const Eigen::VectorXd& { return t.layer[k - 1]; });
  return report;
}

std::string report_json(const GofReport& report) {
  nlohmann::ordered_json j;
  j["label"] = report.label;
  j["n_sims"] = report.n_sims;
  j["degenerate"] = report.degenerate;
  j["probabilities"] = kReportProbs;
  auto& stats = j["statistics"] = nlohmann::ordered_json::array();
  for (const auto& b : report.statistics)
    stats.push_back({{"layer", b.layer},
                     {"statistic", b.statistic},
                     {"quantiles", b.quantiles},
                     {"observed", b.observed},
                     {"contained", b.contained}});
  auto& degs = j["degrees"] = nlohmann::ordered_json::array();
  for (const auto& b : report.degrees)
    degs.push_back({{"view", b.view},
                    {"degree", b.degree},
                    {"quantiles", b.quantiles},
                    {"observed", b.observed},
                    {"contained", b.contained}});
  return j.dump(2);
}

void write_report_csv(std::ostream& out, const GofReport& report) {
  out << "kind,layer,name,q2.5,q25,q50,q75,q97.5,observed,contained\n";
  auto row = [&](const char* kind, const std::string& layer, const std::string& name, const std::array<double, 5>& q,
                 double obs, bool contained) {
    out << kind << ',' << layer << ',' << name;
    for (double v : q) out << ',' << v;
    out << ',' << obs << ',' << (contained ? "true" : "false") << '\n';
  };
  for (const auto& b : report.statistics)
    row("statistic", std::to_string(b.layer), b.statistic, b.quantiles, b.observed, b.contained);
  for (const auto& b : report.degrees) row("degree", b.view, std::to_string(b.degree), b.quantiles, b.observed, b.contained);
}

}  // namespace mlergm
