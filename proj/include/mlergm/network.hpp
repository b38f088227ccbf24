#pragma once

// Weighted signed networks and their decomposition into nested binary layers
// x_1 ⊇ x_2 ⊇ ... ⊇ x_K plus a sign matrix z on the x_1 support.

#include <optional>
#include <string>
#include <vector>

#include "mlergm/types.hpp"

namespace mlergm {

class WeightedSignedNetwork {
 public:
  WeightedSignedNetwork() = default;
  /// Throws std::invalid_argument on asymmetric weights, a nonzero diagonal,
  /// or label/attribute vectors whose length differs from the node count.
  explicit WeightedSignedNetwork(WeightMatrix weights, std::vector<std::string> labels = {},
                                 NodeAttributes attributes = {});

  int n_nodes() const { return static_cast<int>(weights_.rows()); }
  const WeightMatrix& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const NodeAttributes& attributes() const { return attributes_; }
  /// Throws std::out_of_range naming the attribute when it is missing.
  const std::vector<std::string>& attribute(const std::string& name) const;

 private:
  WeightMatrix weights_;
  std::vector<std::string> labels_;
  NodeAttributes attributes_;
};

/// Nested binary layers plus signs. Plain aggregate: use validate() to check
/// the invariants of a stack assembled by hand.
struct LayerStack {
  std::vector<BinaryLayer> layers;  // x_1 .. x_K, layers[k-1] == x_k
  SignMatrix signs;                 // z, zero off the x_1 support
  std::vector<double> thresholds;   // tau_2 .. tau_K

  int n_nodes() const { return static_cast<int>(signs.rows()); }
  int n_layers() const { return static_cast<int>(layers.size()); }
  const BinaryLayer& layer(int k) const { return layers.at(static_cast<std::size_t>(k - 1)); }

  friend bool operator==(const LayerStack& a, const LayerStack& b) {
    return a.layers == b.layers && a.signs == b.signs && a.thresholds == b.thresholds;
  }
};

/// y_k = z * x_k restricted to layer k, with the support x_{k-1} it lives on.
struct SignedLayerView {
  int k = 1;
  SignMatrix entries;
  BinaryLayer support;
};

enum class InvariantKind { Shape, LayerCount, Binary, Symmetry, Diagonal, Nesting, SignSupport, SignRange, Thresholds };

struct Violation {
  InvariantKind kind;
  int layer = 0;  // 0 for the sign matrix or stack-wide checks
  int i = -1;
  int j = -1;
  std::string message;
};

std::string to_string(InvariantKind kind);

/// x_1 = 1{w != 0}, x_k = 1{|w| >= tau_k} for k >= 2, z = sign(w).
/// Thresholds are tau_2..tau_K and must be positive and strictly increasing.
LayerStack decompose(const WeightedSignedNetwork& net, const std::vector<double>& thresholds);

/// Inverse map with weight = z * (deepest active layer).
WeightedSignedNetwork recompose(const LayerStack& stack);

/// Empty iff every LayerStack invariant holds.
std::vector<Violation> validate(const LayerStack& stack);

/// Throws std::invalid_argument carrying the first violation.
void require_valid(const LayerStack& stack);

SignedLayerView signed_layer(const LayerStack& stack, int k);

/// y_k as a matrix; y_1 == z.
SignMatrix signed_entries(const LayerStack& stack, int k);

struct LayerSummary {
  std::size_t edges = 0;
  double density = 0.0;
  std::optional<double> positive_fraction;  // absent for an empty layer
};

std::vector<LayerSummary> layer_summary(const LayerStack& stack);

/// Support dyads (i < j) of a binary layer in row-major order.
std::vector<Dyad> dyads_of(const BinaryLayer& layer);

/// Node degrees of a binary layer.
Eigen::VectorXi degrees(const BinaryLayer& layer);

/// Node degrees counting only entries equal to `sign`.
Eigen::VectorXi signed_degrees(const SignMatrix& y, int sign);

}  // namespace mlergm
