#include "config.hpp"

#include <filesystem>
#include <regex>
#include <set>

#include <yaml-cpp/yaml.h>

#include "mlergm/io.hpp"

namespace mlergm::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("'" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& section, const char* name, const std::string& prefix, T& out) {
  if (const auto v = section[name]) out = scalar<T>(v, prefix + "." + name);
}

std::size_t positive_count(const YAML::Node& node, const std::string& key) {
  const auto v = scalar<long long>(node, key);
  if (v <= 0) throw ConfigError("'" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

StatisticSpec parse_statistic(const YAML::Node& node, const std::string& key) {
  StatisticSpec spec;
  try {
    if (node.IsScalar()) {
      spec.kind = parse_kind(node.as<std::string>());
      return spec;
    }
    check_keys(node, key, {"kind", "alpha", "attr", "level"});
    if (!node["kind"]) throw ConfigError("'" + key + ".kind' is required");
    spec.kind = parse_kind(node["kind"].as<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
  read(node, "alpha", key, spec.alpha);
  read(node, "attr", key, spec.attr);
  read(node, "level", key, spec.level);
  return spec;
}

StatisticList parse_statistics(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError("'" + key + "' must be a list");
  StatisticList out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(parse_statistic(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

// Scalar, "c * I", "I", a list (diagonal) or a list of rows. Returns an empty
// matrix and sets `scale` for the identity forms.
Eigen::MatrixXd parse_matrix(const YAML::Node& node, const std::string& key, double& scale) {
  if (node.IsScalar()) {
    static const std::regex identity(R"(^\s*(?:([-+0-9.eE]+)\s*\*\s*)?I\s*$)");
    const auto text = node.as<std::string>();
    std::smatch m;
    if (std::regex_match(text, m, identity)) {
      scale = m[1].matched ? std::stod(m[1].str()) : 1.0;
    } else {
      scale = scalar<double>(node, key);
    }
    if (!(scale > 0.0)) throw ConfigError("'" + key + "' scale must be positive");
    return {};
  }
  if (!node.IsSequence() || node.size() == 0) throw ConfigError("'" + key + "' must be a scale, 'c * I' or a matrix");
  const auto p = static_cast<Eigen::Index>(node.size());
  if (node[0].IsScalar()) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) out(i, i) = scalar<double>(node[static_cast<std::size_t>(i)], key);
    return out;
  }
  Eigen::MatrixXd out(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto row = node[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != p)
      throw ConfigError("'" + key + "' must be square");
    for (Eigen::Index j = 0; j < p; ++j) out(i, j) = scalar<double>(row[static_cast<std::size_t>(j)], key);
  }
  return out;
}

}  // namespace

std::vector<StatisticList> ModelConfig::resolve(int n_layers) const {
  const auto n_transitions = static_cast<std::size_t>(n_layers - 1);
  if (!layers.empty()) {
    if (layers.size() != n_transitions)
      throw ConfigError("model.layers has " + std::to_string(layers.size()) + " entries, the data has " +
                        std::to_string(n_transitions) + " transitions");
    return layers;
  }
  if (statistics.empty()) throw ConfigError("model.statistics is empty");
  bool needs_alpha = false;
  for (const auto& s : statistics) needs_alpha |= is_geometric(s.kind) && s.alpha == 0.0;
  if (needs_alpha && alpha.size() != n_transitions)
    throw ConfigError("model.alpha has " + std::to_string(alpha.size()) + " entries, the data has " +
                      std::to_string(n_transitions) + " transitions");
  std::vector<StatisticList> out;
  for (std::size_t t = 0; t < n_transitions; ++t) {
    StatisticList list = statistics;
    for (auto& s : list)
      if (is_geometric(s.kind) && s.alpha == 0.0) s.alpha = alpha[t];
    out.push_back(std::move(list));
  }
  return out;
}

HyperPriors PriorConfig::resolve(Eigen::Index p) const {
  HyperPriors h;
  if (mu0.size() == 0)
    h.mu0 = Eigen::VectorXd::Zero(p);
  else if (mu0.size() == 1)
    h.mu0 = Eigen::VectorXd::Constant(p, mu0(0));
  else
    h.mu0 = mu0;
  h.Sigma0 = Sigma0.size() == 0 ? Eigen::MatrixXd(sigma0_scale * Eigen::MatrixXd::Identity(p, p)) : Sigma0;
  h.nu0 = nu0;
  h.S0 = S0.size() == 0 ? Eigen::MatrixXd(s0_scale * Eigen::MatrixXd::Identity(p, p)) : S0;
  if (h.mu0.size() != p || h.Sigma0.rows() != p || h.S0.rows() != p)
    throw ConfigError("prior dimension differs from the " + std::to_string(p) + " model statistics");
  try {
    h.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("prior: ") + e.what());
  }
  return h;
}

std::string RunConfig::path(const std::string& p) const {
  namespace fs = std::filesystem;
  if (p.empty() || fs::path(p).is_absolute() || source_path.empty()) return p;
  return (fs::path(source_path).parent_path() / p).string();
}

RunConfig default_config() {
  RunConfig c;
  c.model.statistics = {
      {StatKind::EdgesPos, 0.0, "", ""},
      {StatKind::HomophilyPos, 0.0, "party", "R"},
      {StatKind::GwesfPos, 0.0, "", ""},
      {StatKind::GwDegree, 0.0, "", ""},
      {StatKind::GwesePos, 0.0, "", ""},
  };
  c.model.alpha = {0.5, 0.3, 0.1};
  c.mcmc.iterations = 100000;
  c.mcmc.t_start = 200;
  c.mcmc.adapt_every = 50;
  c.mcmc.lambda = 0.2;
  c.mcmc.a_target = 0.234;
  c.mcmc.aux_iters = 5000;
  return c;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config is not valid YAML: line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig c = default_config();
  c.source_path = source;
  c.text = text;
  if (root.IsNull()) return c;
  check_keys(root, "config", {"data", "model", "prior", "mcmc", "gof", "output"});

  if (const auto d = root["data"]) {
    check_keys(d, "data", {"edges", "nodes", "sponsorships", "actors", "targets"});
    read(d, "edges", "data", c.data.edges);
    read(d, "nodes", "data", c.data.nodes);
    read(d, "sponsorships", "data", c.data.sponsorships);
    read(d, "actors", "data", c.data.actors);
    read(d, "targets", "data", c.data.targets);
  }
  if (const auto m = root["model"]) {
    check_keys(m, "model", {"statistics", "alpha", "layers"});
    if (m["statistics"]) c.model.statistics = parse_statistics(m["statistics"], "model.statistics");
    read(m, "alpha", "model", c.model.alpha);
    if (const auto layers = m["layers"]) {
      if (!layers.IsSequence()) throw ConfigError("'model.layers' must be a list of statistic lists");
      for (std::size_t t = 0; t < layers.size(); ++t)
        c.model.layers.push_back(parse_statistics(layers[t], "model.layers[" + std::to_string(t) + "]"));
    }
    for (double a : c.model.alpha)
      if (!(a > 0.0)) throw ConfigError("'model.alpha' entries must be positive");
  }
  if (const auto p = root["prior"]) {
    check_keys(p, "prior", {"mu0", "Sigma0", "nu0", "S0"});
    if (const auto mu = p["mu0"]) {
      if (mu.IsScalar()) {
        // A single value is broadcast once the model dimension is known.
        c.prior.mu0 = Eigen::VectorXd::Constant(1, scalar<double>(mu, "prior.mu0"));
      } else {
        const auto values = scalar<std::vector<double>>(mu, "prior.mu0");
        c.prior.mu0 = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
      }
    }
    if (p["Sigma0"]) c.prior.Sigma0 = parse_matrix(p["Sigma0"], "prior.Sigma0", c.prior.sigma0_scale);
    if (p["S0"]) c.prior.S0 = parse_matrix(p["S0"], "prior.S0", c.prior.s0_scale);
    read(p, "nu0", "prior", c.prior.nu0);
  }
  if (const auto m = root["mcmc"]) {
    check_keys(m, "mcmc", {"iterations", "t_start", "adapt_every", "lambda", "a_target", "aux_iters", "thin", "seed",
                           "chains", "gamma0", "adapt_stop", "continuous_adaptation", "refresh_proposal_cov",
                           "threads"});
    if (m["iterations"]) c.mcmc.iterations = positive_count(m["iterations"], "mcmc.iterations");
    if (m["t_start"]) c.mcmc.t_start = scalar<std::size_t>(m["t_start"], "mcmc.t_start");
    if (m["adapt_every"]) c.mcmc.adapt_every = positive_count(m["adapt_every"], "mcmc.adapt_every");
    read(m, "lambda", "mcmc", c.mcmc.lambda);
    read(m, "a_target", "mcmc", c.mcmc.a_target);
    if (m["aux_iters"]) c.mcmc.aux_iters = positive_count(m["aux_iters"], "mcmc.aux_iters");
    if (m["thin"]) c.mcmc.thin = positive_count(m["thin"], "mcmc.thin");
    read(m, "seed", "mcmc", c.mcmc.seed);
    if (m["chains"]) c.chains = positive_count(m["chains"], "mcmc.chains");
    read(m, "gamma0", "mcmc", c.mcmc.gamma0);
    if (m["adapt_stop"]) c.mcmc.adapt_stop = scalar<std::size_t>(m["adapt_stop"], "mcmc.adapt_stop");
    read(m, "continuous_adaptation", "mcmc", c.mcmc.continuous_adaptation);
    read(m, "refresh_proposal_cov", "mcmc", c.mcmc.refresh_proposal_cov);
    if (m["threads"]) c.mcmc.threads = static_cast<unsigned>(positive_count(m["threads"], "mcmc.threads"));
  }
  if (const auto g = root["gof"]) {
    check_keys(g, "gof", {"n_sims", "aux_iters", "burn_in", "seed"});
    if (g["n_sims"]) c.gof.n_sims = positive_count(g["n_sims"], "gof.n_sims");
    if (g["aux_iters"]) c.gof.aux_iters = positive_count(g["aux_iters"], "gof.aux_iters");
    if (g["burn_in"]) c.gof.burn_in = scalar<std::size_t>(g["burn_in"], "gof.burn_in");
    read(g, "seed", "gof", c.gof.seed);
  }
  if (const auto o = root["output"]) {
    if (o.IsScalar()) {
      c.output = o.as<std::string>();
    } else {
      check_keys(o, "output", {"dir"});
      read(o, "dir", "output", c.output);
    }
  }
  try {
    c.mcmc.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mcmc: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error&) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  return parse_config(text, path);
}

}  // namespace mlergm::cli
