#pragma once

// Hierarchical prior phi_k | mu, Sigma ~ N(mu, Sigma), mu ~ N(mu0, Sigma0),
// Sigma ~ InverseWishart(nu0, S0), and its conjugate Gibbs conditionals.

#include "mlergm/distributions.hpp"

namespace mlergm {

struct HyperPriors {
  Eigen::VectorXd mu0;
  Eigen::MatrixXd Sigma0;
  double nu0 = 0.0;
  Eigen::MatrixXd S0;

  Eigen::Index dim() const { return mu0.size(); }
  /// tau0 = Sigma0^{-1}
  Eigen::MatrixXd precision0() const;
  /// Throws std::invalid_argument on non-conformable shapes, a non-PD Sigma0
  /// or S0, or nu0 <= p - 1.
  void check() const;

  /// mu0 = 0, Sigma0 = sigma0_scale * I, nu0, S0 = s0_scale * I.
  static HyperPriors isotropic(Eigen::Index p, double sigma0_scale, double nu0, double s0_scale);
};

struct HyperState {
  Eigen::VectorXd mu;
  Eigen::MatrixXd Sigma;
};

/// log N(phi | mu, Sigma). Throws std::domain_error if Sigma is not PD.
double log_prior(const Eigen::VectorXd& phi, const HyperState& hyper);

struct GaussianConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// mu | phi_{1:M}, Sigma: cov = (tau0 + M Sigma^{-1})^{-1},
/// mean = cov (tau0 mu0 + M Sigma^{-1} phibar). Rows of `phis` are the M layer
/// vectors; M = 0 returns the prior.
GaussianConditional mu_conditional(const Eigen::MatrixXd& phis, const Eigen::MatrixXd& Sigma,
                                   const HyperPriors& priors);

struct InverseWishartParams {
  double nu = 0.0;
  Eigen::MatrixXd scale;
};

/// Sigma | phi_{1:M}, mu: nu_n = nu0 + M, S_n = S0 + sum_k (phi_k - mu)(phi_k - mu)^T.
InverseWishartParams sigma_conditional(const Eigen::MatrixXd& phis, const Eigen::VectorXd& mu,
                                       const HyperPriors& priors);

/// One Gibbs sweep: mu from its conditional at the current Sigma, then Sigma
/// given the new mu. A draw that fails the PD check is redrawn with a small
/// diagonal jitter and counted in `jitter_events`.
HyperState gibbs_hyper(const Eigen::MatrixXd& phis, const Eigen::MatrixXd& Sigma, const HyperPriors& priors,
                       Rng& rng, int* jitter_events = nullptr);

/// Draw (mu, Sigma) from the hyperprior.
HyperState sample_hyperprior(const HyperPriors& priors, Rng& rng);

/// Analytic moments of InverseWishart(nu, S).
Eigen::MatrixXd inverse_wishart_mean(const InverseWishartParams& iw);
Eigen::MatrixXd inverse_wishart_variance(const InverseWishartParams& iw);

}  // namespace mlergm
