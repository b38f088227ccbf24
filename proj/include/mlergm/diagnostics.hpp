#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mlergm {

struct EssResult {
  double ess = 0.0;
  bool degenerate = false;  // constant series; ess reported as the length
};

/// Effective sample size by Geyer's initial positive (monotone) sequence over
/// paired autocorrelations. Never exceeds the series length. Throws
/// std::invalid_argument for fewer than 10 draws.
EssResult ess(std::span<const double> series);

/// Sample autocorrelation at lags 0..max_lag (biased normalisation).
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Linear-interpolation (type 7) quantile of unsorted values.
double quantile(std::vector<double> values, double prob);

inline constexpr std::array<double, 5> kReportProbs{0.025, 0.25, 0.5, 0.75, 0.975};

/// Quantiles at kReportProbs.
std::array<double, 5> report_quantiles(const std::vector<double>& values);

}  // namespace mlergm
