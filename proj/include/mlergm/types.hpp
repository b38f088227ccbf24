#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mlergm {

/// Signed integer edge weights, 0 = no edge.
using WeightMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary layer x_k (entries 0/1).
using BinaryLayer = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Entries in {-1, 0, +1}: the sign matrix z or a signed layer y_k = z * x_k.
using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Statistic values aligned with an ordered statistic list.
using StatVector = Eigen::VectorXd;

/// Categorical node attributes keyed by name, one string per node.
using NodeAttributes = std::map<std::string, std::vector<std::string>>;

struct Dyad {
  int i = 0;
  int j = 0;
  friend bool operator==(const Dyad&, const Dyad&) = default;
};

}  // namespace mlergm
