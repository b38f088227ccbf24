#pragma once

// Layer-transition sufficient statistics s(z, x_k; x_{k-1}) evaluated on the
// signed layer y_k, and their change statistics for single-dyad toggles.

#include <string>
#include <string_view>
#include <vector>

#include "mlergm/network.hpp"
#include "mlergm/types.hpp"

namespace mlergm {

enum class StatKind {
  EdgesPos,
  EdgesNeg,
  HomophilyPos,
  GwDegree,
  GwesfPos,
  GwesePos,
  GwesfNeg,
  GweseNeg,
  Persistence,
};

std::string_view kind_name(StatKind kind);
/// Throws std::invalid_argument for an unknown name.
StatKind parse_kind(std::string_view name);
bool is_geometric(StatKind kind);

struct StatisticSpec {
  StatKind kind = StatKind::EdgesPos;
  double alpha = 0.0;  // decay, geometric kinds only
  std::string attr;    // homophily only
  std::string level;

  /// Name used in chain and report columns. Decay is omitted so that the same
  /// statistic carries the same label in every layer.
  std::string label() const;
  friend bool operator==(const StatisticSpec&, const StatisticSpec&) = default;
};

using StatisticList = std::vector<StatisticSpec>;

/// A statistic list bound to a node set: attribute masks resolved and the
/// geometric weight tables precomputed. Immutable after construction.
class LayerModel {
 public:
  struct Term {
    StatKind kind;
    std::vector<double> weight;       // w(c) = e^a (1 - (1 - e^-a)^c), c = 0..n
    std::vector<std::uint8_t> level;  // homophily: 1 if the node carries the level
  };

  LayerModel() = default;
  /// Throws std::invalid_argument on alpha <= 0 for a geometric kind or on an
  /// unknown attribute / empty level for homophily.
  LayerModel(StatisticList specs, const NodeAttributes& attributes, int n_nodes);

  const StatisticList& specs() const { return specs_; }
  const std::vector<Term>& terms() const { return terms_; }
  int n_nodes() const { return n_nodes_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(specs_.size()); }
  std::vector<std::string> labels() const;

 private:
  StatisticList specs_;
  std::vector<Term> terms_;
  int n_nodes_ = 0;
};

/// e^a * (1 - (1 - e^-a)^count)
double geometric_weight(double alpha, int count);

/// Full evaluation. Throws std::invalid_argument if y has an entry off the
/// support x_prev.
StatVector compute(const LayerModel& model, const SignMatrix& y, const BinaryLayer& x_prev);
StatVector compute(const StatisticList& specs, const SignMatrix& y, const BinaryLayer& x_prev,
                   const NodeAttributes& attributes);

/// s(y with dyad = to) - s(y with dyad = from), computed incrementally.
/// Requires x_prev(i,j) == 1 and y(i,j) == from.
StatVector change_stat(const LayerModel& model, Dyad dyad, int from, int to, const SignMatrix& y,
                       const BinaryLayer& x_prev);
StatVector change_stat(const StatisticList& specs, Dyad dyad, int from, int to, const SignMatrix& y,
                       const BinaryLayer& x_prev, const NodeAttributes& attributes);

struct SignFlipTerm {
  int k = 2;              // layer whose transition factor the term belongs to
  StatVector delta;       // s(y_k with dyad = +1) - s(y_k with dyad = -1)
};

/// Summands of the sign log-odds: one entry per layer k >= 2 with x_k(i,j) = 1.
/// `models[k-2]` is the model of transition k. Throws if the dyad is not
/// interacting.
std::vector<SignFlipTerm> sign_flip_change(const std::vector<LayerModel>& models, Dyad dyad,
                                           const LayerStack& stack);

}  // namespace mlergm
