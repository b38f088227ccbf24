#pragma once

// Adaptive approximate exchange sampler for the hierarchical multi-layer
// dissolution model: per-layer exchange updates of phi_k, scale adaptation
// toward a target acceptance rate, and conjugate Gibbs updates of (mu, Sigma).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlergm/hyper.hpp"
#include "mlergm/network.hpp"
#include "mlergm/statistics.hpp"

namespace mlergm {

struct LayerAdapt {
  double gamma = 0.1;
  Eigen::MatrixXd B;  // base proposal covariance
  std::size_t window_proposals = 0;
  std::size_t window_accepts = 0;

  double window_rate() const {
    return window_proposals == 0 ? 0.0 : static_cast<double>(window_accepts) / static_cast<double>(window_proposals);
  }
};

struct McmcConfig {
  std::size_t iterations = 1000;  // T
  std::size_t t_start = 200;
  std::size_t adapt_every = 50;
  double lambda = 0.2;
  double a_target = 0.234;
  std::size_t aux_iters = 5000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  double gamma0 = 0.1;
  /// Last iteration at which adaptation may fire; defaults to T/2.
  std::optional<std::size_t> adapt_stop;
  /// Adapt for the whole run, ignoring adapt_stop.
  bool continuous_adaptation = false;
  /// Replace B_k by the layer's empirical posterior covariance at checkpoints.
  bool refresh_proposal_cov = false;
  unsigned threads = 1;

  std::size_t effective_adapt_stop() const { return adapt_stop.value_or(iterations / 2); }
  /// Throws std::invalid_argument on non-positive scalars or a_target outside (0,1).
  void check() const;
};

/// gamma (1 + lambda) if rate > a_target, else gamma (1 - lambda).
double adapt_gamma(double gamma, double rate, double lambda, double a_target);

/// Applies adapt_gamma with the window rate and resets the window counters.
void adapt(LayerAdapt& layer, double lambda, double a_target);

/// Returns s(y') for an auxiliary draw at the given parameter.
using AuxSimulator = std::function<StatVector(const Eigen::VectorXd& phi, Rng& rng)>;

/// (phi - phi')^T [s(y') - s(y)] + log N(phi' | mu, Sigma) - log N(phi | mu, Sigma)
double exchange_log_alpha(const Eigen::VectorXd& phi, const Eigen::VectorXd& proposal, const StatVector& aux_stats,
                          const StatVector& observed, const HyperState& hyper);

struct ExchangeResult {
  bool accepted = false;
  Eigen::VectorXd phi;
  double log_alpha = 0.0;
};

/// phi' ~ N(phi, gamma^2 B), auxiliary draw at phi', accept iff log u < log alpha.
ExchangeResult exchange_step(const Eigen::VectorXd& phi, const HyperState& hyper, const LayerAdapt& adapt,
                             const StatVector& observed, const AuxSimulator& simulate, Rng& rng);

struct ExchangeTarget {
  int k = 2;            // layer index of the transition
  StatVector observed;  // s(y_k^obs)
  AuxSimulator simulate;
};

struct Chain {
  std::vector<std::string> stat_labels;
  std::vector<int> layer_ids;  // k for each parameter block
  std::vector<std::size_t> iterations;
  std::vector<Eigen::MatrixXd> phi;  // M x p per stored iteration
  std::vector<Eigen::VectorXd> mu;
  std::vector<Eigen::MatrixXd> Sigma;
  std::vector<std::vector<std::uint8_t>> accepted;  // last exchange outcome per layer
  std::vector<Eigen::VectorXd> gamma;
  std::vector<std::size_t> total_proposals;  // per layer, whole run
  std::vector<std::size_t> total_accepts;
  std::uint64_t seed = 0;
  std::string fingerprint;
  int jitter_events = 0;

  std::size_t size() const { return iterations.size(); }
  Eigen::Index n_blocks() const { return static_cast<Eigen::Index>(layer_ids.size()); }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(stat_labels.size()); }
  Eigen::VectorXd acceptance_rates() const;
};

/// Runs the sampler over arbitrary exchange targets (one per transition block).
Chain run_exchange(const std::vector<ExchangeTarget>& targets, std::vector<std::string> stat_labels,
                   const HyperPriors& priors, const McmcConfig& config);

/// Observed data for each transition factor: support, inherited signs and
/// the observed signed layer.
struct TransitionData {
  int k = 2;
  BinaryLayer support;
  std::optional<SignMatrix> inherited;
  SignMatrix observed;
};

std::vector<TransitionData> transition_data(const LayerStack& stack);

/// Binds per-layer statistic lists to the node set; throws if the lists are
/// not conformable (same length and labels in every layer) or their count is
/// not K - 1.
std::vector<LayerModel> bind_models(const std::vector<StatisticList>& models, const NodeAttributes& attributes,
                                    int n_nodes, int n_layers);

/// Full posterior fit of a layer stack.
Chain fit(const LayerStack& stack, const NodeAttributes& attributes, const std::vector<StatisticList>& models,
          const HyperPriors& priors, const McmcConfig& config);

}  // namespace mlergm
