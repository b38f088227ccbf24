#pragma once

// Brute-force enumeration of a transition factor on tiny supports: exact
// normalising constants, conditionals, samples and grid posteriors.

#include <functional>
#include <optional>
#include <vector>

#include "mlergm/distributions.hpp"
#include "mlergm/sampler.hpp"
#include "mlergm/statistics.hpp"

namespace mlergm {

inline constexpr int kMaxEnumeratedDyads = 8;

enum class SignMode { Free, Constrained };

/// State table of every configuration on the support. Configuration c assigns
/// dyad d the digit (c / base^d) % base: free mode maps digits 0,1,2 to
/// -1,0,+1; constrained mode maps 0,1 to 0 and the inherited sign.
struct EnumeratedFactor {
  std::vector<Dyad> support;
  BinaryLayer x_prev;
  SignMode mode = SignMode::Free;
  SignMatrix inherited;          // constrained mode only
  Eigen::MatrixXd stats;         // one row per configuration
  Eigen::VectorXd log_weight;    // phi' s(y)
  double log_kappa = 0.0;

  int base() const { return mode == SignMode::Free ? 3 : 2; }
  std::size_t n_states() const { return static_cast<std::size_t>(stats.rows()); }
  Eigen::VectorXd probabilities() const;
  SignMatrix configuration(std::size_t index) const;
  /// Index of `y`; throws if y is not a configuration of this factor.
  std::size_t index_of(const SignMatrix& y) const;
};

/// Enumerates all configurations and their statistics, then weights them at
/// phi. Throws std::invalid_argument when the support exceeds
/// kMaxEnumeratedDyads or constrained mode lacks `inherited`.
EnumeratedFactor enumerate(const BinaryLayer& x_prev, const LayerModel& model, const Eigen::VectorXd& phi,
                           SignMode mode, const SignMatrix* inherited = nullptr);

/// Recomputes log-weights and kappa at a new phi.
void reweight(EnumeratedFactor& factor, const Eigen::VectorXd& phi);

/// Conditional of `dyad` given the other entries of `y`, by restricting the table.
StateProbabilities exact_conditional(const EnumeratedFactor& factor, Dyad dyad, const SignMatrix& y);

/// Independent exact draw of a configuration index.
std::size_t exact_sample(const EnumeratedFactor& factor, Rng& rng);

struct GridPosterior {
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd weights;  // normalised
  Eigen::VectorXd mean;
  double boundary_mass = 0.0;  // mass on the grid's outermost points
  bool too_coarse = false;     // boundary_mass > 1e-6
};

using LogPrior = std::function<double(const Eigen::VectorXd&)>;

/// Exact posterior over a 1-D or 2-D tensor grid (`axes` holds one or two
/// coordinate lists) given an observed configuration.
GridPosterior grid_posterior(const EnumeratedFactor& factor, const SignMatrix& observed,
                             const std::vector<std::vector<double>>& axes, const LogPrior& log_prior);

}  // namespace mlergm
