#pragma once

#include "mlergm/statistics.hpp"

namespace mlergm {

/// Mutable signed layer with cached degrees and shared-partner counts, so that
/// a change statistic costs one row scan and a committed toggle costs O(n).
class LayerState {
 public:
  LayerState(const LayerModel& model, SignMatrix y);

  const SignMatrix& y() const { return y_; }
  int state(int i, int j) const { return y_(i, j); }
  int degree(int u) const { return degree_(u); }
  /// #{m : y(u,m) = sigma and y(v,m) = sigma}
  int partners(int u, int v, int sigma) const { return sigma > 0 ? pos_partners_(u, v) : neg_partners_(u, v); }

  /// Change statistic for moving dyad (i,j) from its current state to `to`;
  /// writes model.size() values to `out`.
  void delta(int i, int j, int to, double* out) const;
  StatVector delta(int i, int j, int to) const;

  void set(int i, int j, int to);

  /// Current statistics, maintained incrementally.
  const StatVector& stats() const { return stats_; }

 private:
  const LayerModel* model_;
  SignMatrix y_;
  Eigen::VectorXi degree_;
  Eigen::MatrixXi pos_partners_;
  Eigen::MatrixXi neg_partners_;
  StatVector stats_;
  mutable StatVector scratch_;
};

}  // namespace mlergm
