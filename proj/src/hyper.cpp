#include "mlergm/hyper.hpp"

#include <stdexcept>

namespace mlergm {

Eigen::MatrixXd HyperPriors::precision0() const {
  return Sigma0.llt().solve(Eigen::MatrixXd::Identity(dim(), dim()));
}

void HyperPriors::check() const {
  const auto p = dim();
  if (p == 0) throw std::invalid_argument("hyperpriors: empty mean vector");
  if (Sigma0.rows() != p || Sigma0.cols() != p || S0.rows() != p || S0.cols() != p)
    throw std::invalid_argument("hyperpriors: Sigma0 and S0 must be p x p");
  if (!is_spd(Sigma0)) throw std::invalid_argument("hyperpriors: Sigma0 is not symmetric positive-definite");
  if (!is_spd(S0)) throw std::invalid_argument("hyperpriors: S0 is not symmetric positive-definite");
  if (!(nu0 > static_cast<double>(p) - 1.0)) throw std::invalid_argument("hyperpriors: nu0 must exceed p - 1");
}

HyperPriors HyperPriors::isotropic(Eigen::Index p, double sigma0_scale, double nu0, double s0_scale) {
  HyperPriors out;
  out.mu0 = Eigen::VectorXd::Zero(p);
  out.Sigma0 = sigma0_scale * Eigen::MatrixXd::Identity(p, p);
  out.nu0 = nu0;
  out.S0 = s0_scale * Eigen::MatrixXd::Identity(p, p);
  return out;
}

double log_prior(const Eigen::VectorXd& phi, const HyperState& hyper) {
  return log_mvn_density(phi, hyper.mu, hyper.Sigma);
}

GaussianConditional mu_conditional(const Eigen::MatrixXd& phis, const Eigen::MatrixXd& Sigma,
                                   const HyperPriors& priors) {
  const auto p = priors.dim();
  const auto M = phis.rows();
  if (M == 0) return {priors.mu0, priors.Sigma0};
  if (phis.cols() != p || Sigma.rows() != p || Sigma.cols() != p)
    throw std::invalid_argument("mu_conditional: dimension mismatch");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd tau0 = priors.precision0();
  const Eigen::MatrixXd sigma_inv = Sigma.llt().solve(I);
  const Eigen::VectorXd phibar = phis.colwise().mean().transpose();
  GaussianConditional out;
  out.cov = (tau0 + static_cast<double>(M) * sigma_inv).llt().solve(I);
  out.cov = (out.cov + out.cov.transpose()) / 2;
  out.mean = out.cov * (tau0 * priors.mu0 + static_cast<double>(M) * sigma_inv * phibar);
  return out;
}

InverseWishartParams sigma_conditional(const Eigen::MatrixXd& phis, const Eigen::VectorXd& mu,
                                       const HyperPriors& priors) {
  InverseWishartParams out{priors.nu0 + static_cast<double>(phis.rows()), priors.S0};
  for (Eigen::Index k = 0; k < phis.rows(); ++k) {
    const Eigen::VectorXd d = phis.row(k).transpose() - mu;
    out.scale += d * d.transpose();
  }
  return out;
}

HyperState gibbs_hyper(const Eigen::MatrixXd& phis, const Eigen::MatrixXd& Sigma, const HyperPriors& priors,
                       Rng& rng, int* jitter_events) {
  HyperState next;
  const auto mu_cond = mu_conditional(phis, Sigma, priors);
  next.mu = sample_mvn(mu_cond.mean, mu_cond.cov, rng);
  const auto iw = sigma_conditional(phis, next.mu, priors);
  next.Sigma = sample_inverse_wishart(iw.nu, iw.scale, rng);
  double jitter = 1e-10 * iw.scale.diagonal().mean();
  while (!is_spd(next.Sigma)) {
    if (jitter_events) ++*jitter_events;
    next.Sigma = sample_inverse_wishart(iw.nu, iw.scale, rng);
    next.Sigma.diagonal().array() += jitter;
    jitter *= 10;
  }
  return next;
}

HyperState sample_hyperprior(const HyperPriors& priors, Rng& rng) {
  HyperState out;
  out.mu = sample_mvn(priors.mu0, priors.Sigma0, rng);
  out.Sigma = sample_inverse_wishart(priors.nu0, priors.S0, rng);
  return out;
}

Eigen::MatrixXd inverse_wishart_mean(const InverseWishartParams& iw) {
  const double p = static_cast<double>(iw.scale.rows());
  if (!(iw.nu > p + 1)) throw std::domain_error("inverse-Wishart mean needs nu > p + 1");
  return iw.scale / (iw.nu - p - 1);
}

Eigen::MatrixXd inverse_wishart_variance(const InverseWishartParams& iw) {
  const double p = static_cast<double>(iw.scale.rows());
  const double nu = iw.nu;
  if (!(nu > p + 3)) throw std::domain_error("inverse-Wishart variance needs nu > p + 3");
  const auto& s = iw.scale;
  const Eigen::Index q = s.rows();
  Eigen::MatrixXd var(q, q);
  const double denom = (nu - p) * (nu - p - 1) * (nu - p - 1) * (nu - p - 3);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      var(i, j) = ((nu - p + 1) * s(i, j) * s(i, j) + (nu - p - 1) * s(i, i) * s(j, j)) / denom;
  return var;
}

}  // namespace mlergm
