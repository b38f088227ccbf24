#pragma once

// Random number plumbing and the dense Gaussian / inverse-Wishart helpers used
// by the samplers. Free functions are templated on Eigen expressions so they
// accept blocks, maps and temporaries without copies.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace mlergm {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; derives independent stream seeds from one master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> standard_normal_vector(Eigen::Index n, Rng& rng) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = static_cast<Scalar>(standard_normal(rng));
  return z;
}

/// Lower Cholesky factor; throws if the matrix is not symmetric positive-definite.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> cholesky_lower(
    const Eigen::MatrixBase<Derived>& a) {
  Eigen::LLT<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a);
  if (llt.info() != Eigen::Success) throw std::domain_error("matrix is not positive-definite");
  return llt.matrixL();
}

template <typename Derived>
bool is_spd(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar tol = 1e-10) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::LLT<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a);
  return llt.info() == Eigen::Success;
}

/// Draw from N(mean, cov).
template <typename DerivedM, typename DerivedC>
Eigen::Matrix<typename DerivedM::Scalar, Eigen::Dynamic, 1> sample_mvn(
    const Eigen::MatrixBase<DerivedM>& mean, const Eigen::MatrixBase<DerivedC>& cov, Rng& rng) {
  using Scalar = typename DerivedM::Scalar;
  const auto lower = cholesky_lower(cov);
  return mean + lower * standard_normal_vector<Scalar>(mean.size(), rng);
}

/// Multivariate normal log-density log N(x | mean, cov).
template <typename DerivedX, typename DerivedM, typename DerivedC>
typename DerivedX::Scalar log_mvn_density(const Eigen::MatrixBase<DerivedX>& x,
                                          const Eigen::MatrixBase<DerivedM>& mean,
                                          const Eigen::MatrixBase<DerivedC>& cov) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.size() != mean.size() || cov.rows() != x.size() || cov.cols() != x.size())
    throw std::invalid_argument("log_mvn_density: dimension mismatch");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw std::domain_error("log_mvn_density: covariance is not positive-definite");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diff = x - mean;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = llt.matrixL().solve(diff);
  const Scalar log_det = 2 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const auto p = static_cast<Scalar>(x.size());
  return Scalar(-0.5) * (p * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + log_det + w.squaredNorm());
}

/// Draw W ~ Wishart(nu, scale) by the Bartlett decomposition.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_wishart(
    typename Derived::Scalar nu, const Eigen::MatrixBase<Derived>& scale, Rng& rng) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index p = scale.rows();
  if (nu <= static_cast<Scalar>(p - 1)) throw std::invalid_argument("sample_wishart: nu must exceed p - 1");
  const Matrix lower = cholesky_lower(scale);
  Matrix a = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(nu) - static_cast<double>(i));
    a(i, i) = static_cast<Scalar>(std::sqrt(chi2(rng)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = static_cast<Scalar>(standard_normal(rng));
  }
  const Matrix la = lower * a;
  return la * la.transpose();
}

/// Draw Sigma ~ InverseWishart(nu, scale), density proportional to
/// |Sigma|^{-(nu+p+1)/2} exp(-tr(scale Sigma^{-1}) / 2).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_inverse_wishart(
    typename Derived::Scalar nu, const Eigen::MatrixBase<Derived>& scale, Rng& rng) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix scale_inv = scale.llt().solve(Matrix::Identity(scale.rows(), scale.cols()));
  const Matrix w = sample_wishart(nu, scale_inv, rng);
  Matrix sigma = w.llt().solve(Matrix::Identity(w.rows(), w.cols()));
  return (sigma + sigma.transpose()) / 2;
}

/// Numerically stable log(sum(exp(v))).
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.derived().array() - m).exp().sum());
}

}  // namespace mlergm
