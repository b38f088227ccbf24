#pragma once

// Bipartite sponsorship data to a multilayer signed network: row centring,
// cosine similarity and density-targeted magnitude thresholds.

#include <cstdint>
#include <stdexcept>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlergm/network.hpp"
#include "mlergm/types.hpp"

namespace mlergm {

struct BipartiteIncidence {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> entries;  // actors x items
  std::vector<std::string> actor_labels;
  NodeAttributes attributes;  // every actors-table column except label
  std::vector<std::string> items;

  int n_actors() const { return static_cast<int>(entries.rows()); }
  int n_items() const { return static_cast<int>(entries.cols()); }
};

/// Reads `senator_id,bill_id` rows and a `label,party,state` actor table.
/// Actors keep the table's order; items keep first-appearance order. Repeated
/// pairs collapse to one entry. Throws ParseError on unknown actors, missing
/// columns or fewer than two actors.
BipartiteIncidence read_incidence(std::istream& sponsorships, std::istream& actors);

/// Subtracts each row's mean. Throws std::invalid_argument on an empty matrix.
template <class Derived>
Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> center_rows(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("center_rows: empty matrix");
  const Eigen::MatrixXd d = m.template cast<double>();
  return d.colwise() - d.rowwise().mean();
}

struct SimilarityMatrix {
  Eigen::MatrixXd values;      // symmetric, unit diagonal, entries in [-1, 1]
  std::vector<int> zero_rows;  // rows with zero norm; their similarities are 0
};

SimilarityMatrix cosine(const Eigen::MatrixXd& rows);

struct ThresholdResult {
  std::vector<double> targets;
  std::vector<double> thresholds;  // on |S|, one per layer
  std::vector<double> achieved_density;
  std::vector<double> positive_fraction;
  std::vector<bool> exact;  // false when ties made the target count unreachable
  WeightMatrix weights;     // signed depth
  LayerStack stack;
};

/// Layer k keeps dyads with |S_ij| >= tau_k, where tau_k is the smallest
/// observed magnitude whose inclusive count stays within d_k * C(n,2); tied
/// magnitudes are all in or all out. Signs come from S on x_1 (S_ij = 0 counts
/// as positive). Targets must satisfy 1 >= d_1 > ... > d_K > 0 with K >= 2.
ThresholdResult density_thresholds(const SimilarityMatrix& s, const std::vector<double>& targets);

std::string provenance_json(const ThresholdResult& result, const BipartiteIncidence& data,
                            const std::vector<std::string>& input_hashes);

}  // namespace mlergm
