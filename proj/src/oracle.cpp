#include "mlergm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlergm {

namespace {

int digit_state(SignMode mode, int digit, int inherited) {
  if (mode == SignMode::Free) return digit - 1;
  return digit == 0 ? 0 : inherited;
}

int state_digit(SignMode mode, int state) {
  return mode == SignMode::Free ? state + 1 : (state != 0 ? 1 : 0);
}

}  // namespace

Eigen::VectorXd EnumeratedFactor::probabilities() const {
  return (log_weight.array() - log_kappa).exp().matrix();
}

SignMatrix EnumeratedFactor::configuration(std::size_t index) const {
  const auto n = x_prev.rows();
  SignMatrix y = SignMatrix::Zero(n, n);
  std::size_t rest = index;
  for (const auto& d : support) {
    const int digit = static_cast<int>(rest % static_cast<std::size_t>(base()));
    rest /= static_cast<std::size_t>(base());
    const int inherited_sign = mode == SignMode::Constrained ? inherited(d.i, d.j) : 0;
    const auto s = static_cast<std::int8_t>(digit_state(mode, digit, inherited_sign));
    y(d.i, d.j) = y(d.j, d.i) = s;
  }
  return y;
}

std::size_t EnumeratedFactor::index_of(const SignMatrix& y) const {
  if (y.rows() != x_prev.rows() || y.cols() != x_prev.cols())
    throw std::invalid_argument("index_of: shape mismatch");
  std::size_t index = 0;
  std::size_t place = 1;
  for (const auto& d : support) {
    const int s = y(d.i, d.j);
    if (mode == SignMode::Constrained && s != 0 && s != inherited(d.i, d.j))
      throw std::invalid_argument("index_of: sign differs from the inherited sign");
    index += place * static_cast<std::size_t>(state_digit(mode, s));
    place *= static_cast<std::size_t>(base());
  }
  if ((y.array() != 0).count() != 2 * static_cast<Eigen::Index>(
                           std::count_if(support.begin(), support.end(), [&](const Dyad& d) { return y(d.i, d.j) != 0; })))
    throw std::invalid_argument("index_of: entry off the support");
  return index;
}

EnumeratedFactor enumerate(const BinaryLayer& x_prev, const LayerModel& model, const Eigen::VectorXd& phi,
                           SignMode mode, const SignMatrix* inherited) {
  EnumeratedFactor f;
  f.support = dyads_of(x_prev);
  if (f.support.size() > static_cast<std::size_t>(kMaxEnumeratedDyads))
    throw std::invalid_argument("enumerate: support has " + std::to_string(f.support.size()) + " dyads, limit is " +
                                std::to_string(kMaxEnumeratedDyads));
  if (mode == SignMode::Constrained) {
    if (inherited == nullptr) throw std::invalid_argument("enumerate: constrained mode needs inherited signs");
    for (const auto& d : f.support)
      if ((*inherited)(d.i, d.j) == 0) throw std::invalid_argument("enumerate: support dyad without inherited sign");
    f.inherited = *inherited;
  }
  f.x_prev = x_prev;
  f.mode = mode;
  std::size_t n_states = 1;
  for (std::size_t d = 0; d < f.support.size(); ++d) n_states *= static_cast<std::size_t>(f.base());
  f.stats.resize(static_cast<Eigen::Index>(n_states), model.size());
  for (std::size_t c = 0; c < n_states; ++c)
    f.stats.row(static_cast<Eigen::Index>(c)) = compute(model, f.configuration(c), x_prev).transpose();
  reweight(f, phi);
  return f;
}

void reweight(EnumeratedFactor& factor, const Eigen::VectorXd& phi) {
  if (phi.size() != factor.stats.cols()) throw std::invalid_argument("reweight: parameter length mismatch");
  factor.log_weight = factor.stats * phi;
  factor.log_kappa = log_sum_exp(factor.log_weight);
}

StateProbabilities exact_conditional(const EnumeratedFactor& factor, Dyad dyad, const SignMatrix& y) {
  std::size_t position = factor.support.size();
  for (std::size_t d = 0; d < factor.support.size(); ++d) {
    const auto& s = factor.support[d];
    if ((s.i == dyad.i && s.j == dyad.j) || (s.i == dyad.j && s.j == dyad.i)) position = d;
  }
  if (position == factor.support.size()) throw std::invalid_argument("exact_conditional: dyad off the support");

  SignMatrix probe = y;
  std::array<double, 3> logits{};
  std::array<bool, 3> allowed{};
  for (int s = -1; s <= 1; ++s) {
    if (factor.mode == SignMode::Constrained && s != 0 && s != factor.inherited(dyad.i, dyad.j)) continue;
    probe(dyad.i, dyad.j) = probe(dyad.j, dyad.i) = static_cast<std::int8_t>(s);
    const auto idx = factor.index_of(probe);
    logits[static_cast<std::size_t>(s + 1)] = factor.log_weight(static_cast<Eigen::Index>(idx));
    allowed[static_cast<std::size_t>(s + 1)] = true;
  }
  return normalized(logits, allowed);
}

std::size_t exact_sample(const EnumeratedFactor& factor, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (Eigen::Index c = 0; c < factor.log_weight.size(); ++c) {
    acc += std::exp(factor.log_weight(c) - factor.log_kappa);
    if (u < acc) return static_cast<std::size_t>(c);
  }
  return factor.n_states() - 1;
}

GridPosterior grid_posterior(const EnumeratedFactor& factor, const SignMatrix& observed,
                             const std::vector<std::vector<double>>& axes, const LogPrior& log_prior) {
  if (axes.empty() || axes.size() > 2) throw std::invalid_argument("grid_posterior: need 1 or 2 axes");
  if (static_cast<Eigen::Index>(axes.size()) != factor.stats.cols())
    throw std::invalid_argument("grid_posterior: axis count differs from the parameter length");
  for (const auto& axis : axes)
    if (axis.size() < 3) throw std::invalid_argument("grid_posterior: each axis needs >= 3 points");

  const Eigen::VectorXd s_obs = factor.stats.row(static_cast<Eigen::Index>(factor.index_of(observed))).transpose();
  EnumeratedFactor work = factor;
  GridPosterior out;
  std::vector<double> log_post;
  std::vector<bool> on_boundary;
  const std::size_t n0 = axes[0].size();
  const std::size_t n1 = axes.size() == 2 ? axes[1].size() : 1;
  for (std::size_t a = 0; a < n0; ++a) {
    for (std::size_t b = 0; b < n1; ++b) {
      Eigen::VectorXd phi(static_cast<Eigen::Index>(axes.size()));
      phi(0) = axes[0][a];
      if (axes.size() == 2) phi(1) = axes[1][b];
      reweight(work, phi);
      log_post.push_back(phi.dot(s_obs) - work.log_kappa + log_prior(phi));
      on_boundary.push_back(a == 0 || a + 1 == n0 || (axes.size() == 2 && (b == 0 || b + 1 == n1)));
      out.points.push_back(std::move(phi));
    }
  }
  const Eigen::Map<const Eigen::VectorXd> lp(log_post.data(), static_cast<Eigen::Index>(log_post.size()));
  out.weights = (lp.array() - log_sum_exp(lp)).exp().matrix();
  out.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t g = 0; g < out.points.size(); ++g) {
    out.mean += out.weights(static_cast<Eigen::Index>(g)) * out.points[g];
    if (on_boundary[g]) out.boundary_mass += out.weights(static_cast<Eigen::Index>(g));
  }
  out.too_coarse = out.boundary_mass > 1e-6;
  return out;
}

}  // namespace mlergm
