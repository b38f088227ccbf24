#pragma once

// Metropolis-within-Gibbs simulation of signed layer transitions
// (z, x_k) | x_{k-1}: random-scan single-dyad updates drawn from the exact
// categorical conditional of the exponential-family factor.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mlergm/distributions.hpp"
#include "mlergm/layer_state.hpp"
#include "mlergm/network.hpp"

namespace mlergm {

struct LayerParams {
  int k = 2;  // transition into layer k
  Eigen::VectorXd phi;
};

struct SamplerConfig {
  std::size_t n_iters = 1;  // single-dyad update proposals
  std::uint64_t seed = 0;
  bool constrain_signs = false;
};

/// Probabilities over states {-1, 0, +1}, indexed by state + 1.
using StateProbabilities = std::array<double, 3>;

/// Softmax of logits over the allowed states (others get probability 0).
StateProbabilities normalized(const std::array<double, 3>& logits, const std::array<bool, 3>& allowed);

/// One transition factor: the model, its support x_{k-1}, and (when signs are
/// constrained) the previous signed layer whose signs are inherited.
class TransitionSampler {
 public:
  TransitionSampler(const LayerModel& model, BinaryLayer support, std::optional<SignMatrix> inherited = std::nullopt);

  const std::vector<Dyad>& support_dyads() const { return dyads_; }
  const BinaryLayer& support() const { return support_; }
  bool constrained() const { return inherited_.has_value(); }
  const LayerModel& model() const { return *model_; }

  /// Full conditional of dyad (i,j) given the rest of `state`.
  StateProbabilities conditional(const LayerState& state, Dyad dyad, const Eigen::VectorXd& phi) const;

  /// `n_iters` random-scan Gibbs updates applied to `state` in place.
  void run(LayerState& state, const Eigen::VectorXd& phi, std::size_t n_iters, Rng& rng) const;

  /// Start state restricted to this factor's support (and inherited signs).
  SignMatrix restrict_start(const SignMatrix& y) const;

 private:
  const LayerModel* model_;
  BinaryLayer support_;
  std::optional<SignMatrix> inherited_;
  std::vector<Dyad> dyads_;
};

/// Categorical conditional of one dyad. With `inherited` set, the allowed
/// states are {0, inherited(i,j)}; otherwise {-1, 0, +1}.
StateProbabilities dyad_conditional(Dyad dyad, const SignMatrix& y, const BinaryLayer& x_prev,
                                    const Eigen::VectorXd& phi, const LayerModel& model,
                                    const SignMatrix* inherited = nullptr);

struct TransitionDraw {
  SignMatrix y;
  StatVector stats;
};

/// Runs config.n_iters updates from `start` (the observed layer for warm
/// starts; nullptr for an empty start). `inherited` is required when
/// config.constrain_signs is set.
TransitionDraw simulate_transition(const LayerModel& model, const BinaryLayer& x_prev, const SignMatrix* inherited,
                                   const SignMatrix* start, const LayerParams& params, const SamplerConfig& config);

struct CascadeDraw {
  LayerStack stack;
  std::vector<StatVector> stats;  // stats[k-2] for transition k
};

/// Simulates (z, x_2..x_K) given x_1: transition 2 with free signs, then
/// transitions 3..K inheriting signs. Dyads dissolving at transition 2 take a
/// sign drawn from the +/- part of their final conditional. `warm_start`
/// (optional) seeds each transition with the observed layer restricted to
/// the simulated support. Layer seeds are derived from config.seed.
CascadeDraw simulate_cascade(const BinaryLayer& x1, const std::vector<LayerModel>& models,
                             const std::vector<Eigen::VectorXd>& phis, const SamplerConfig& config,
                             const LayerStack* warm_start = nullptr);

}  // namespace mlergm
