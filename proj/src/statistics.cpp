#include "mlergm/statistics.hpp"

#include <cmath>
#include <stdexcept>

#include "mlergm/detail/change_kernel.hpp"

namespace mlergm {

namespace {

struct KindName {
  StatKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {StatKind::EdgesPos, "edges_pos"},       {StatKind::EdgesNeg, "edges_neg"},
    {StatKind::HomophilyPos, "homophily_pos"}, {StatKind::GwDegree, "gwdegree"},
    {StatKind::GwesfPos, "gwesf_pos"},       {StatKind::GwesePos, "gwese_pos"},
    {StatKind::GwesfNeg, "gwesf_neg"},       {StatKind::GweseNeg, "gwese_neg"},
    {StatKind::Persistence, "persistence"},
};

void check_support(const SignMatrix& y, const BinaryLayer& x_prev) {
  if (y.rows() != y.cols() || x_prev.rows() != y.rows() || x_prev.cols() != y.cols())
    throw std::invalid_argument("signed layer and support differ in shape");
  const int n = static_cast<int>(y.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (y(i, j) != 0 && x_prev(i, j) != 1)
        throw std::invalid_argument("signed layer has an edge (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") outside its support");
}

// Partner counts recomputed from y on demand: O(n) per query.
struct ScanCounts {
  const SignMatrix& y;
  int partners(int u, int v, int sigma) const {
    const auto s = static_cast<std::int8_t>(sigma);
    return ((y.col(u).array() == s) && (y.col(v).array() == s)).count();
  }
  int degree(int u) const { return static_cast<int>((y.col(u).array() != 0).count()); }
};

}  // namespace

std::string_view kind_name(StatKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

StatKind parse_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  throw std::invalid_argument("unknown statistic kind '" + std::string(name) + "'");
}

bool is_geometric(StatKind kind) {
  switch (kind) {
    case StatKind::GwDegree:
    case StatKind::GwesfPos:
    case StatKind::GwesePos:
    case StatKind::GwesfNeg:
    case StatKind::GweseNeg: return true;
    default: return false;
  }
}

std::string StatisticSpec::label() const {
  std::string out(kind_name(kind));
  if (kind == StatKind::HomophilyPos) out += "[" + attr + "=" + level + "]";
  return out;
}

double geometric_weight(double alpha, int count) {
  if (count <= 0) return 0.0;
  return std::exp(alpha) * (1.0 - std::pow(1.0 - std::exp(-alpha), count));
}

LayerModel::LayerModel(StatisticList specs, const NodeAttributes& attributes, int n_nodes)
    : specs_(std::move(specs)), n_nodes_(n_nodes) {
  terms_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    Term term{spec.kind, {}, {}};
    if (is_geometric(spec.kind)) {
      if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))
        throw std::invalid_argument("statistic " + spec.label() + " needs a decay alpha > 0");
      term.weight.resize(static_cast<std::size_t>(n_nodes) + 2);
      for (int c = 0; c <= n_nodes + 1; ++c) term.weight[static_cast<std::size_t>(c)] = geometric_weight(spec.alpha, c);
    }
    if (spec.kind == StatKind::HomophilyPos) {
      auto it = attributes.find(spec.attr);
      if (it == attributes.end())
        throw std::invalid_argument("homophily statistic refers to unknown attribute '" + spec.attr + "'");
      if (spec.level.empty()) throw std::invalid_argument("homophily statistic needs a level");
      if (static_cast<int>(it->second.size()) != n_nodes)
        throw std::invalid_argument("attribute '" + spec.attr + "' length differs from node count");
      term.level.resize(static_cast<std::size_t>(n_nodes));
      for (int v = 0; v < n_nodes; ++v)
        term.level[static_cast<std::size_t>(v)] = it->second[static_cast<std::size_t>(v)] == spec.level;
    }
    terms_.push_back(std::move(term));
  }
}

std::vector<std::string> LayerModel::labels() const {
  std::vector<std::string> out;
  for (const auto& s : specs_) out.push_back(s.label());
  return out;
}

StatVector compute(const LayerModel& model, const SignMatrix& y, const BinaryLayer& x_prev) {
  check_support(y, x_prev);
  const int n = static_cast<int>(y.rows());
  if (n != model.n_nodes()) throw std::invalid_argument("layer size differs from the model's node count");
  StatVector s = StatVector::Zero(model.size());
  const Eigen::VectorXi deg = (y.array() != 0).cast<int>().rowwise().sum();
  for (Eigen::Index t = 0; t < model.size(); ++t) {
    const auto& term = model.terms()[static_cast<std::size_t>(t)];
    double value = 0.0;
    switch (term.kind) {
      case StatKind::EdgesPos:
      case StatKind::EdgesNeg: {
        const int want = term.kind == StatKind::EdgesPos ? 1 : -1;
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < j; ++i) value += y(i, j) == want;
        break;
      }
      case StatKind::HomophilyPos:
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < j; ++i)
            value += y(i, j) == 1 && term.level[static_cast<std::size_t>(i)] && term.level[static_cast<std::size_t>(j)];
        break;
      case StatKind::Persistence:
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < j; ++i) value += y(i, j) != 0 && x_prev(i, j) == 1;
        break;
      case StatKind::GwDegree:
        for (int v = 0; v < n; ++v) value += term.weight[static_cast<std::size_t>(deg(v))];
        break;
      case StatKind::GwesfPos:
      case StatKind::GwesePos:
      case StatKind::GwesfNeg:
      case StatKind::GweseNeg: {
        int edge_sign = 0, partner_sign = 0;
        detail::partner_signature(term.kind, edge_sign, partner_sign);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < j; ++i) {
            if (y(i, j) != edge_sign) continue;
            int shared = 0;
            for (int m = 0; m < n; ++m) shared += y(i, m) == partner_sign && y(j, m) == partner_sign;
            value += term.weight[static_cast<std::size_t>(shared)];
          }
        break;
      }
    }
    s(t) = value;
  }
  return s;
}

StatVector compute(const StatisticList& specs, const SignMatrix& y, const BinaryLayer& x_prev,
                   const NodeAttributes& attributes) {
  return compute(LayerModel(specs, attributes, static_cast<int>(y.rows())), y, x_prev);
}

StatVector change_stat(const LayerModel& model, Dyad dyad, int from, int to, const SignMatrix& y,
                       const BinaryLayer& x_prev) {
  const auto [i, j] = dyad;
  const int n = static_cast<int>(y.rows());
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw std::out_of_range("change_stat: dyad out of range");
  if (x_prev(i, j) != 1) throw std::invalid_argument("change_stat: dyad outside the support layer");
  if (from < -1 || from > 1 || to < -1 || to > 1) throw std::invalid_argument("change_stat: states must lie in {-1,0,+1}");
  if (y(i, j) != from) throw std::invalid_argument("change_stat: dyad is not in the stated from-state");
  StatVector d(model.size());
  detail::accumulate_delta(model, y, i, j, from, to, ScanCounts{y}, d.data());
  return d;
}

StatVector change_stat(const StatisticList& specs, Dyad dyad, int from, int to, const SignMatrix& y,
                       const BinaryLayer& x_prev, const NodeAttributes& attributes) {
  return change_stat(LayerModel(specs, attributes, static_cast<int>(y.rows())), dyad, from, to, y, x_prev);
}

std::vector<SignFlipTerm> sign_flip_change(const std::vector<LayerModel>& models, Dyad dyad,
                                           const LayerStack& stack) {
  const auto [i, j] = dyad;
  if (stack.layer(1)(i, j) != 1) throw std::invalid_argument("sign_flip_change: dyad is not interacting");
  if (static_cast<int>(models.size()) != stack.n_layers() - 1)
    throw std::invalid_argument("sign_flip_change: need one model per transition");
  std::vector<SignFlipTerm> out;
  const int z = stack.signs(i, j);
  for (int k = 2; k <= stack.n_layers() && stack.layer(k)(i, j) == 1; ++k) {
    const SignMatrix y = signed_entries(stack, k);
    const auto& model = models[static_cast<std::size_t>(k - 2)];
    StatVector delta = z < 0 ? change_stat(model, dyad, -1, 1, y, stack.layer(k - 1))
                             : StatVector(-change_stat(model, dyad, 1, -1, y, stack.layer(k - 1)));
    out.push_back({k, std::move(delta)});
  }
  return out;
}

}  // namespace mlergm
