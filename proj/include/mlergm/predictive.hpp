#pragma once

// Prior and posterior predictive simulation and goodness-of-fit summaries.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlergm/hyper.hpp"
#include "mlergm/network.hpp"
#include "mlergm/statistics.hpp"

namespace mlergm {

/// Degree histograms (entry d = number of nodes with degree d).
struct DegreeTally {
  Eigen::VectorXd positive;            // signed degree on x_1, z = +1
  Eigen::VectorXd negative;            // signed degree on x_1, z = -1
  std::vector<Eigen::VectorXd> layer;  // sign-blind degree, layer[k-1] for x_k
};

DegreeTally degree_tally(const LayerStack& stack);

struct ObservedSummary {
  std::vector<StatVector> stats;  // stats[k-2]
  DegreeTally degrees;
};

ObservedSummary observe(const LayerStack& stack, const std::vector<LayerModel>& models);

struct PredictiveEnsemble {
  int n_layers = 0;
  std::vector<std::string> stat_labels;
  std::vector<std::vector<StatVector>> stats;  // [sim][k-2]
  std::vector<DegreeTally> degrees;            // [sim]
  std::size_t invalid_draws = 0;               // simulations failing stack validation

  std::size_t size() const { return stats.size(); }
};

struct PredictiveConfig {
  std::size_t n_sims = 1000;
  std::size_t aux_iters = 5000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// For each simulation: (mu, Sigma) from the hyperprior, phi_k | mu, Sigma for
/// every transition, then a forward cascade from x_1.
PredictiveEnsemble prior_predictive(const BinaryLayer& x1, const std::vector<LayerModel>& models,
                                    const HyperPriors& priors, const PredictiveConfig& config,
                                    const LayerStack* warm_start = nullptr);

/// For each simulation: a stored iteration drawn uniformly (all layers
/// jointly), then a forward cascade. Throws on an empty draw list.
PredictiveEnsemble posterior_predictive(const std::vector<Eigen::MatrixXd>& phi_draws, const BinaryLayer& x1,
                                        const std::vector<LayerModel>& models, const PredictiveConfig& config,
                                        const LayerStack* warm_start = nullptr);

struct StatisticBand {
  int layer = 2;
  std::string statistic;
  std::array<double, 5> quantiles{};
  double observed = 0.0;
  bool contained = false;
};

struct DegreeBand {
  std::string view;  // "positive", "negative", "layer<k>"
  int degree = 0;
  std::array<double, 5> quantiles{};
  double observed = 0.0;
  bool contained = false;
};

struct GofReport {
  std::string label;
  std::size_t n_sims = 0;
  bool degenerate = false;  // a single simulation: all quantiles coincide
  std::vector<StatisticBand> statistics;
  std::vector<DegreeBand> degrees;
};

/// Quantile bands (2.5/25/50/75/97.5%) with containment of the observed value
/// in [2.5%, 97.5%]. Throws std::invalid_argument on an empty ensemble.
GofReport gof_report(const PredictiveEnsemble& ensemble, const ObservedSummary& observed, std::string label);

std::string report_json(const GofReport& report);
void write_report_csv(std::ostream& out, const GofReport& report);

}  // namespace mlergm
