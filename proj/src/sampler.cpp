#include "mlergm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlergm {

namespace {
constexpr int kMaxStatistics = 32;
}  // namespace

StateProbabilities normalized(const std::array<double, 3>& logits, const std::array<bool, 3>& allowed) {
  double top = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < 3; ++v)
    if (allowed[v]) top = std::max(top, logits[v]);
  StateProbabilities p{0.0, 0.0, 0.0};
  double total = 0.0;
  for (int v = 0; v < 3; ++v)
    if (allowed[v]) {
      p[v] = std::exp(logits[v] - top);
      total += p[v];
    }
  for (auto& q : p) q /= total;
  return p;
}

TransitionSampler::TransitionSampler(const LayerModel& model, BinaryLayer support, std::optional<SignMatrix> inherited)
    : model_(&model), support_(std::move(support)), inherited_(std::move(inherited)) {
  if (support_.rows() != model.n_nodes() || support_.cols() != model.n_nodes())
    throw std::invalid_argument("TransitionSampler: support size differs from the model");
  if (inherited_ && (inherited_->rows() != support_.rows() || inherited_->cols() != support_.cols()))
    throw std::invalid_argument("TransitionSampler: inherited sign matrix has the wrong shape");
  if (model.size() > kMaxStatistics) throw std::invalid_argument("TransitionSampler: too many statistics");
  dyads_ = dyads_of(support_);
  if (inherited_)
    for (const auto& d : dyads_)
      if ((*inherited_)(d.i, d.j) == 0)
        throw std::invalid_argument("TransitionSampler: support dyad without an inherited sign");
}

StateProbabilities TransitionSampler::conditional(const LayerState& state, Dyad dyad, const Eigen::VectorXd& phi) const {
  const auto [i, j] = dyad;
  if (support_(i, j) != 1) throw std::invalid_argument("dyad_conditional: dyad outside the support layer");
  std::array<bool, 3> allowed{true, true, true};
  if (inherited_) {
    const int s = (*inherited_)(i, j);
    allowed = {s == -1, true, s == 1};
  }
  const int current = state.state(i, j);
  std::array<double, 3> logits{0.0, 0.0, 0.0};
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStatistics, 1> scratch(model_->size());
  for (int v = -1; v <= 1; ++v) {
    if (!allowed[v + 1] || v == current) continue;
    state.delta(i, j, v, scratch.data());
    logits[v + 1] = phi.dot(scratch);
  }
  return normalized(logits, allowed);
}

void TransitionSampler::run(LayerState& state, const Eigen::VectorXd& phi, std::size_t n_iters, Rng& rng) const {
  if (phi.size() != model_->size()) throw std::invalid_argument("parameter length differs from the statistic count");
  if (dyads_.empty()) return;
  const auto m = static_cast<std::uint64_t>(dyads_.size());
  for (std::size_t t = 0; t < n_iters; ++t) {
    const Dyad d = dyads_[static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, m - 1)(rng))];
    const auto p = conditional(state, d, phi);
    const double u = uniform01(rng);
    const int next = u < p[0] ? -1 : (u < p[0] + p[1] ? 0 : 1);
    state.set(d.i, d.j, next);
  }
}

SignMatrix TransitionSampler::restrict_start(const SignMatrix& y) const {
  SignMatrix out = SignMatrix::Zero(support_.rows(), support_.cols());
  for (const auto& [i, j] : dyads_) {
    int v = y(i, j);
    if (inherited_ && v != 0 && v != (*inherited_)(i, j)) v = 0;
    out(i, j) = out(j, i) = static_cast<std::int8_t>(v);
  }
  return out;
}

StateProbabilities dyad_conditional(Dyad dyad, const SignMatrix& y, const BinaryLayer& x_prev,
                                    const Eigen::VectorXd& phi, const LayerModel& model, const SignMatrix* inherited) {
  TransitionSampler sampler(model, x_prev, inherited ? std::optional<SignMatrix>(*inherited) : std::nullopt);
  LayerState state(model, y);
  return sampler.conditional(state, dyad, phi);
}

TransitionDraw simulate_transition(const LayerModel& model, const BinaryLayer& x_prev, const SignMatrix* inherited,
                                   const SignMatrix* start, const LayerParams& params, const SamplerConfig& config) {
  if (config.n_iters < 1) throw std::invalid_argument("SamplerConfig: n_iters must be >= 1");
  if (config.constrain_signs && inherited == nullptr)
    throw std::invalid_argument("simulate_transition: constrained signs need the previous signed layer");
  TransitionSampler sampler(model, x_prev,
                            config.constrain_signs ? std::optional<SignMatrix>(*inherited) : std::nullopt);
  const int n = model.n_nodes();
  LayerState state(model, start ? sampler.restrict_start(*start) : SignMatrix(SignMatrix::Zero(n, n)));
  Rng rng(config.seed);
  sampler.run(state, params.phi, config.n_iters, rng);
  return {state.y(), state.stats()};
}

CascadeDraw simulate_cascade(const BinaryLayer& x1, const std::vector<LayerModel>& models,
                             const std::vector<Eigen::VectorXd>& phis, const SamplerConfig& config,
                             const LayerStack* warm_start) {
  const int n_transitions = static_cast<int>(models.size());
  if (n_transitions < 1) throw std::invalid_argument("simulate_cascade: need at least one transition");
  if (static_cast<int>(phis.size()) != n_transitions)
    throw std::invalid_argument("simulate_cascade: one parameter vector per transition is required");
  if (warm_start && warm_start->n_layers() != n_transitions + 1)
    throw std::invalid_argument("simulate_cascade: warm start has the wrong layer count");
  const int n = static_cast<int>(x1.rows());
  const int K = n_transitions + 1;

  CascadeDraw draw;
  draw.stack.layers.assign(static_cast<std::size_t>(K), BinaryLayer::Zero(n, n));
  draw.stack.layers[0] = x1;
  draw.stack.signs = SignMatrix::Zero(n, n);
  for (int k = 2; k <= K; ++k) draw.stack.thresholds.push_back(k);

  SignMatrix previous;  // y_{k-1}
  for (int k = 2; k <= K; ++k) {
    const auto& model = models[static_cast<std::size_t>(k - 2)];
    const BinaryLayer& support = draw.stack.layers[static_cast<std::size_t>(k - 2)];
    TransitionSampler sampler(model, support, k == 2 ? std::nullopt : std::optional<SignMatrix>(previous));
    SignMatrix start = SignMatrix::Zero(n, n);
    if (warm_start) start = sampler.restrict_start(signed_entries(*warm_start, k));
    LayerState state(model, std::move(start));
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(k)));
    sampler.run(state, phis[static_cast<std::size_t>(k - 2)], config.n_iters, rng);

    if (k == 2) {
      for (const auto& d : sampler.support_dyads()) {
        int sign = state.state(d.i, d.j);
        if (sign == 0) {
          const auto p = sampler.conditional(state, d, phis[0]);
          sign = uniform01(rng) * (p[0] + p[2]) < p[2] ? 1 : -1;
        }
        draw.stack.signs(d.i, d.j) = draw.stack.signs(d.j, d.i) = static_cast<std::int8_t>(sign);
      }
    }
    draw.stack.layers[static_cast<std::size_t>(k - 1)] = state.y().cwiseAbs().cast<std::uint8_t>();
    draw.stats.push_back(state.stats());
    previous = state.y();
  }
  return draw;
}

}  // namespace mlergm
