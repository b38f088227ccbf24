#include "mlergm/network.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mlergm {

namespace {

std::string dyad_text(int i, int j) {
  std::ostringstream out;
  out << "(" << i << "," << j << ")";
  return out.str();
}

int sign_of(int w) { return (w > 0) - (w < 0); }

}  // namespace

WeightedSignedNetwork::WeightedSignedNetwork(WeightMatrix weights, std::vector<std::string> labels,
                                             NodeAttributes attributes)
    : weights_(std::move(weights)), labels_(std::move(labels)), attributes_(std::move(attributes)) {
  if (weights_.rows() != weights_.cols()) throw std::invalid_argument("weight matrix must be square");
  const int n = n_nodes();
  for (int i = 0; i < n; ++i) {
    if (weights_(i, i) != 0) throw std::invalid_argument("nonzero diagonal weight at node " + std::to_string(i));
    for (int j = i + 1; j < n; ++j)
      if (weights_(i, j) != weights_(j, i))
        throw std::invalid_argument("weight matrix is not symmetric at dyad " + dyad_text(i, j));
  }
  if (labels_.empty()) {
    labels_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  } else if (static_cast<int>(labels_.size()) != n) {
    throw std::invalid_argument("label count differs from node count");
  }
  for (const auto& [name, values] : attributes_)
    if (static_cast<int>(values.size()) != n)
      throw std::invalid_argument("attribute '" + name + "' has length " + std::to_string(values.size()) +
                                  ", expected " + std::to_string(n));
}

const std::vector<std::string>& WeightedSignedNetwork::attribute(const std::string& name) const {
  auto it = attributes_.find(name);
  if (it == attributes_.end()) throw std::out_of_range("unknown node attribute '" + name + "'");
  return it->second;
}

std::string to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::Shape: return "shape";
    case InvariantKind::LayerCount: return "layer-count";
    case InvariantKind::Binary: return "binary";
    case InvariantKind::Symmetry: return "symmetry";
    case InvariantKind::Diagonal: return "diagonal";
    case InvariantKind::Nesting: return "nesting";
    case InvariantKind::SignSupport: return "sign-support";
    case InvariantKind::SignRange: return "sign-range";
    case InvariantKind::Thresholds: return "thresholds";
  }
  return "unknown";
}

LayerStack decompose(const WeightedSignedNetwork& net, const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("decompose: at least one threshold (tau_2) is required");
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    if (!(thresholds[t] > 0.0)) throw std::invalid_argument("decompose: thresholds must be positive");
    if (t > 0 && !(thresholds[t] > thresholds[t - 1]))
      throw std::invalid_argument("decompose: thresholds must be strictly increasing");
  }
  const int n = net.n_nodes();
  const auto& w = net.weights();
  LayerStack stack;
  stack.thresholds = thresholds;
  stack.signs = SignMatrix::Zero(n, n);
  stack.layers.assign(thresholds.size() + 1, BinaryLayer::Zero(n, n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int wij = w(i, j);
      if (wij == 0) continue;
      stack.signs(i, j) = static_cast<std::int8_t>(sign_of(wij));
      stack.layers[0](i, j) = 1;
      const double magnitude = std::abs(wij);
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (magnitude >= thresholds[t])
          stack.layers[t + 1](i, j) = 1;
        else
          break;
      }
    }
  }
  return stack;
}

WeightedSignedNetwork recompose(const LayerStack& stack) {
  for (const auto& v : validate(stack))
    if (v.kind == InvariantKind::Nesting || v.kind == InvariantKind::Shape || v.kind == InvariantKind::LayerCount)
      throw std::invalid_argument("recompose: " + v.message);
  const int n = stack.n_nodes();
  WeightMatrix w = WeightMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int depth = 0;
      for (int k = 1; k <= stack.n_layers() && stack.layer(k)(i, j) == 1; ++k) depth = k;
      w(i, j) = stack.signs(i, j) * depth;
    }
  return WeightedSignedNetwork(std::move(w));
}

std::vector<Violation> validate(const LayerStack& stack) {
  std::vector<Violation> out;
  const int n = stack.n_nodes();
  if (stack.signs.rows() != stack.signs.cols()) {
    out.push_back({InvariantKind::Shape, 0, -1, -1, "sign matrix is not square"});
    return out;
  }
  if (stack.n_layers() < 2)
    out.push_back({InvariantKind::LayerCount, 0, -1, -1, "a layer stack needs K >= 2 layers"});
  if (stack.thresholds.size() + 1 != stack.layers.size())
    out.push_back({InvariantKind::Thresholds, 0, -1, -1, "threshold count must equal K - 1"});
  for (std::size_t t = 0; t < stack.thresholds.size(); ++t) {
    if (!(stack.thresholds[t] > 0.0) || (t > 0 && !(stack.thresholds[t] > stack.thresholds[t - 1])))
      out.push_back({InvariantKind::Thresholds, static_cast<int>(t + 2), -1, -1,
                     "thresholds must be positive and strictly increasing"});
  }
  for (int k = 1; k <= stack.n_layers(); ++k) {
    if (stack.layer(k).rows() != n || stack.layer(k).cols() != n) {
      out.push_back({InvariantKind::Shape, k, -1, -1, "layer " + std::to_string(k) + " has the wrong shape"});
      return out;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (stack.signs(i, i) != 0)
      out.push_back({InvariantKind::Diagonal, 0, i, i, "sign diagonal nonzero at node " + std::to_string(i)});
    for (int k = 1; k <= stack.n_layers(); ++k)
      if (stack.layer(k)(i, i) != 0)
        out.push_back({InvariantKind::Diagonal, k, i, i,
                       "layer " + std::to_string(k) + " diagonal nonzero at node " + std::to_string(i)});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto d = dyad_text(i, j);
      const int zij = stack.signs(i, j);
      if (zij < -1 || zij > 1 || stack.signs(j, i) < -1 || stack.signs(j, i) > 1)
        out.push_back({InvariantKind::SignRange, 0, i, j, "sign outside {-1,0,+1} at " + d});
      if (zij != stack.signs(j, i))
        out.push_back({InvariantKind::Symmetry, 0, i, j, "sign matrix asymmetric at " + d});
      for (int k = 1; k <= stack.n_layers(); ++k) {
        const auto& x = stack.layer(k);
        if (x(i, j) > 1 || x(j, i) > 1)
          out.push_back({InvariantKind::Binary, k, i, j, "layer " + std::to_string(k) + " non-binary at " + d});
        if (x(i, j) != x(j, i))
          out.push_back({InvariantKind::Symmetry, k, i, j, "layer " + std::to_string(k) + " asymmetric at " + d});
        if (k >= 2 && x(i, j) == 1 && stack.layer(k - 1)(i, j) != 1)
          out.push_back({InvariantKind::Nesting, k, i, j,
                         "edge " + d + " in layer " + std::to_string(k) + " is absent from layer " +
                             std::to_string(k - 1)});
      }
      if ((zij != 0) != (stack.layer(1)(i, j) == 1))
        out.push_back({InvariantKind::SignSupport, 0, i, j,
                       zij != 0 ? "nonzero sign off the interaction support at " + d
                                : "interacting dyad " + d + " has no sign"});
    }
  }
  return out;
}

void require_valid(const LayerStack& stack) {
  const auto violations = validate(stack);
  if (!violations.empty())
    throw std::invalid_argument("invalid layer stack (" + to_string(violations.front().kind) +
                                "): " + violations.front().message);
}

SignMatrix signed_entries(const LayerStack& stack, int k) {
  if (k < 1 || k > stack.n_layers()) throw std::out_of_range("layer index out of range");
  return stack.signs.cwiseProduct(stack.layer(k).cast<std::int8_t>());
}

SignedLayerView signed_layer(const LayerStack& stack, int k) {
  SignedLayerView view;
  view.k = k;
  view.entries = signed_entries(stack, k);
  view.support = k >= 2 ? stack.layer(k - 1) : BinaryLayer::Ones(stack.n_nodes(), stack.n_nodes());
  if (k < 2)
    for (int i = 0; i < stack.n_nodes(); ++i) view.support(i, i) = 0;
  return view;
}

std::vector<LayerSummary> layer_summary(const LayerStack& stack) {
  const int n = stack.n_nodes();
  const double pairs = n >= 2 ? 0.5 * n * (n - 1) : 0.0;
  std::vector<LayerSummary> out;
  for (int k = 1; k <= stack.n_layers(); ++k) {
    std::size_t edges = 0, positive = 0;
    const auto& x = stack.layer(k);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < j; ++i)
        if (x(i, j) == 1) {
          ++edges;
          if (stack.signs(i, j) == 1) ++positive;
        }
    LayerSummary s;
    s.edges = edges;
    s.density = pairs > 0 ? static_cast<double>(edges) / pairs : 0.0;
    if (edges > 0) s.positive_fraction = static_cast<double>(positive) / static_cast<double>(edges);
    out.push_back(s);
  }
  return out;
}

std::vector<Dyad> dyads_of(const BinaryLayer& layer) {
  std::vector<Dyad> out;
  const int n = static_cast<int>(layer.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (layer(i, j) == 1) out.push_back({i, j});
  return out;
}

Eigen::VectorXi degrees(const BinaryLayer& layer) { return layer.cast<int>().rowwise().sum(); }

Eigen::VectorXi signed_degrees(const SignMatrix& y, int sign) {
  return (y.array() == static_cast<std::int8_t>(sign)).cast<int>().rowwise().sum();
}

}  // namespace mlergm
