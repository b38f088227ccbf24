#pragma once

// Shared change-statistic kernel. `Counts` supplies shared-partner counts and
// degrees for the current state, either cached (LayerState) or recomputed on
// demand (free change_stat).

#include "mlergm/statistics.hpp"

namespace mlergm::detail {

/// Edge sign and partner sign of a shared-partner term.
inline void partner_signature(StatKind kind, int& edge_sign, int& partner_sign) {
  switch (kind) {
    case StatKind::GwesfPos: edge_sign = 1; partner_sign = 1; return;
    case StatKind::GwesePos: edge_sign = 1; partner_sign = -1; return;
    case StatKind::GwesfNeg: edge_sign = -1; partner_sign = 1; return;
    case StatKind::GweseNeg: edge_sign = -1; partner_sign = -1; return;
    default: edge_sign = 0; partner_sign = 0; return;
  }
}

template <class Counts>
double shared_partner_delta(const LayerModel::Term& term, const SignMatrix& y, int i, int j, int from, int to,
                            const Counts& counts) {
  int s = 0, sigma = 0;
  partner_signature(term.kind, s, sigma);
  const double* w = term.weight.data();
  double d = 0.0;
  const int own = (to == s) - (from == s);
  if (own != 0) d += own * w[counts.partners(i, j, sigma)];
  const int leg = (to == sigma) - (from == sigma);
  if (leg == 0) return d;
  const int n = static_cast<int>(y.rows());
  const std::int8_t* col_i = y.data() + static_cast<std::ptrdiff_t>(i) * n;
  const std::int8_t* col_j = y.data() + static_cast<std::ptrdiff_t>(j) * n;
  for (int m = 0; m < n; ++m) {
    if (m == i || m == j) continue;
    const int yim = col_i[m];
    const int yjm = col_j[m];
    if (yim == s && yjm == sigma) {
      const int p = counts.partners(i, m, sigma);
      d += w[p + leg] - w[p];
    }
    if (yjm == s && yim == sigma) {
      const int p = counts.partners(j, m, sigma);
      d += w[p + leg] - w[p];
    }
  }
  return d;
}

template <class Counts>
void accumulate_delta(const LayerModel& model, const SignMatrix& y, int i, int j, int from, int to,
                      const Counts& counts, double* out) {
  const auto& terms = model.terms();
  const int active = (to != 0) - (from != 0);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    double d = 0.0;
    if (from != to) {
      switch (term.kind) {
        case StatKind::EdgesPos: d = (to == 1) - (from == 1); break;
        case StatKind::EdgesNeg: d = (to == -1) - (from == -1); break;
        case StatKind::HomophilyPos:
          d = (term.level[static_cast<std::size_t>(i)] && term.level[static_cast<std::size_t>(j)])
                  ? (to == 1) - (from == 1)
                  : 0;
          break;
        case StatKind::Persistence: d = active; break;
        case StatKind::GwDegree:
          if (active != 0) {
            const int di = counts.degree(i), dj = counts.degree(j);
            const double* w = term.weight.data();
            d = w[di + active] - w[di] + w[dj + active] - w[dj];
          }
          break;
        case StatKind::GwesfPos:
        case StatKind::GwesePos:
        case StatKind::GwesfNeg:
        case StatKind::GweseNeg: d = shared_partner_delta(term, y, i, j, from, to, counts); break;
      }
    }
    out[t] = d;
  }
}

}  // namespace mlergm::detail
