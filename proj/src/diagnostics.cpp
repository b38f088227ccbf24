#include "mlergm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlergm {

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  std::vector<double> centred(n);
  for (std::size_t t = 0; t < n; ++t) centred[t] = series[t] - mean;
  double c0 = 0.0;
  for (double x : centred) c0 += x * x;
  max_lag = std::min(max_lag, n - 1);
  std::vector<double> rho(max_lag + 1, 0.0);
  if (c0 <= 0.0) return rho;
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) c += centred[t] * centred[t + lag];
    rho[lag] = c / c0;
  }
  return rho;
}

EssResult ess(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("ess: need at least 10 draws");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  if (*hi - *lo <= 1e-14 * std::max(1.0, scale)) return {static_cast<double>(n), true};

  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  auto rho = [&](std::size_t lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) c += (series[t] - mean) * (series[t + lag] - mean);
    return c / c0;
  };

  // tau = -1 + 2 * sum_m Gamma_m, Gamma_m = rho(2m) + rho(2m+1), truncated at
  // the first non-positive pair and forced monotone non-increasing.
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double gamma = rho(2 * m) + rho(2 * m + 1);
    if (gamma <= 0.0) break;
    gamma = std::min(gamma, previous);
    previous = gamma;
    sum += gamma;
  }
  const double tau = std::max(-1.0 + 2.0 * sum, 1e-12);
  return {std::min(static_cast<double>(n), static_cast<double>(n) / tau), false};
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::array<double, 5> report_quantiles(const std::vector<double>& values) {
  std::array<double, 5> q{};
  for (std::size_t i = 0; i < kReportProbs.size(); ++i) q[i] = quantile(values, kReportProbs[i]);
  return q;
}

}  // namespace mlergm
