#include "mlergm/layer_state.hpp"

#include <stdexcept>

#include "mlergm/detail/change_kernel.hpp"

namespace mlergm {

LayerState::LayerState(const LayerModel& model, SignMatrix y) : model_(&model), y_(std::move(y)) {
  const int n = static_cast<int>(y_.rows());
  if (y_.cols() != n || n != model.n_nodes()) throw std::invalid_argument("LayerState: shape mismatch");
  stats_ = StatVector::Zero(model.size());
  scratch_.resize(model.size());
  // Toggle edges in from an empty layer so the caches and the statistics share
  // one code path.
  const SignMatrix target = y_;
  y_.setZero();
  degree_ = Eigen::VectorXi::Zero(n);
  pos_partners_ = Eigen::MatrixXi::Zero(n, n);
  neg_partners_ = Eigen::MatrixXi::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (target(i, j) != 0) set(i, j, target(i, j));
}

void LayerState::delta(int i, int j, int to, double* out) const {
  detail::accumulate_delta(*model_, y_, i, j, y_(i, j), to, *this, out);
}

StatVector LayerState::delta(int i, int j, int to) const {
  StatVector d(model_->size());
  delta(i, j, to, d.data());
  return d;
}

void LayerState::set(int i, int j, int to) {
  const int from = y_(i, j);
  if (from == to) return;
  delta(i, j, to, scratch_.data());
  stats_ += scratch_;

  const int n = static_cast<int>(y_.rows());
  const int dpos = (to == 1) - (from == 1);
  const int dneg = (to == -1) - (from == -1);
  // Dyad (i,j) is a leg of the two-paths i-j-m and j-i-m.
  for (int m = 0; m < n; ++m) {
    if (m == i || m == j) continue;
    if (dpos != 0) {
      if (y_(j, m) == 1) {
        pos_partners_(i, m) += dpos;
        pos_partners_(m, i) += dpos;
      }
      if (y_(i, m) == 1) {
        pos_partners_(j, m) += dpos;
        pos_partners_(m, j) += dpos;
      }
    }
    if (dneg != 0) {
      if (y_(j, m) == -1) {
        neg_partners_(i, m) += dneg;
        neg_partners_(m, i) += dneg;
      }
      if (y_(i, m) == -1) {
        neg_partners_(j, m) += dneg;
        neg_partners_(m, j) += dneg;
      }
    }
  }
  // Diagonal of the partner matrices holds the signed degree.
  pos_partners_(i, i) += dpos;
  pos_partners_(j, j) += dpos;
  neg_partners_(i, i) += dneg;
  neg_partners_(j, j) += dneg;

  const int dact = (to != 0) - (from != 0);
  degree_(i) += dact;
  degree_(j) += dact;
  y_(i, j) = static_cast<std::int8_t>(to);
  y_(j, i) = static_cast<std::int8_t>(to);
}

}  // namespace mlergm
