#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mlergm/chain_io.hpp"
#include "mlergm/diagnostics.hpp"
#include "mlergm/hash.hpp"
#include "mlergm/predictive.hpp"
#include "mlergm/sampler.hpp"
#include "mlergm/senate.hpp"

namespace mlergm::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : '"' + s + '"';
}

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig c = options.config.empty() ? default_config() : load_config(options.config);
  if (options.seed) {
    c.mcmc.seed = *options.seed;
    c.gof.seed = *options.seed;
  }
  if (!options.out.empty()) c.output = options.out;
  if (options.chains) {
    if (*options.chains == 0) throw ConfigError("--chains must be positive");
    c.chains = *options.chains;
  }
  if (options.n_sims) {
    if (*options.n_sims == 0) throw ConfigError("--n-sims must be positive");
    c.gof.n_sims = *options.n_sims;
  }
  if (options.burn_in) c.gof.burn_in = *options.burn_in;
  return c;
}

std::ifstream open_in(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + what + " '" + path + "'");
  return in;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.output);
  fs::create_directories(dir);
  return dir;
}

std::string hash_text(const std::string& text) { return hex64(fnv1a64(text)); }

ordered_json config_json(const RunConfig& c, const std::vector<StatisticList>& models, const HyperPriors& priors) {
  ordered_json j;
  j["data"] = {{"edges", c.data.edges}, {"nodes", c.data.nodes}};
  auto& layers = j["model"] = ordered_json::array();
  for (std::size_t t = 0; t < models.size(); ++t) {
    ordered_json list = ordered_json::array();
    for (const auto& s : models[t]) {
      ordered_json e{{"kind", std::string(kind_name(s.kind))}};
      if (is_geometric(s.kind)) e["alpha"] = s.alpha;
      if (!s.attr.empty()) e["attr"] = s.attr, e["level"] = s.level;
      list.push_back(e);
    }
    layers.push_back({{"layer", t + 2}, {"statistics", list}});
  }
  auto matrix = [](const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(i, k);
      rows.push_back(row);
    }
    return rows;
  };
  j["prior"] = {{"mu0", std::vector<double>(priors.mu0.data(), priors.mu0.data() + priors.mu0.size())},
                {"Sigma0", matrix(priors.Sigma0)},
                {"nu0", priors.nu0},
                {"S0", matrix(priors.S0)}};
  j["mcmc"] = {{"iterations", c.mcmc.iterations},
               {"t_start", c.mcmc.t_start},
               {"adapt_every", c.mcmc.adapt_every},
               {"lambda", c.mcmc.lambda},
               {"a_target", c.mcmc.a_target},
               {"aux_iters", c.mcmc.aux_iters},
               {"thin", c.mcmc.thin},
               {"seed", c.mcmc.seed},
               {"chains", c.chains},
               {"gamma0", c.mcmc.gamma0},
               {"adapt_stop", c.mcmc.effective_adapt_stop()},
               {"continuous_adaptation", c.mcmc.continuous_adaptation},
               {"refresh_proposal_cov", c.mcmc.refresh_proposal_cov},
               {"threads", c.mcmc.threads}};
  return j;
}

struct Prepared {
  LoadedData data;
  std::vector<StatisticList> lists;
  std::vector<LayerModel> models;
  HyperPriors priors;
};

Prepared prepare(const RunConfig& c) {
  Prepared p;
  p.data = load_data(c);
  p.lists = c.model.resolve(p.data.stack.n_layers());
  p.models = bind_models(p.lists, p.data.nodes.attributes, p.data.stack.n_nodes(), p.data.stack.n_layers());
  p.priors = c.prior.resolve(p.models.front().size());
  return p;
}

fs::path chain_path(const CommandOptions& options, const RunConfig& c) {
  if (!options.chain.empty()) return options.chain;
  return fs::path(c.output) / "chain_1.csv";
}

Chain load_chain(const fs::path& path) {
  auto in = open_in(path.string(), "chain");
  return read_chain_csv(in);
}

std::vector<Eigen::MatrixXd> post_burn_in(const Chain& chain, std::size_t burn_in) {
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t r = 0; r < chain.size(); ++r)
    if (chain.iterations[r] > burn_in) out.push_back(chain.phi[r]);
  if (out.empty())
    throw std::invalid_argument("the chain has no stored draws after burn-in (" + std::to_string(burn_in) + ")");
  return out;
}

std::size_t burn_in_of(const RunConfig& c, const Chain& chain) {
  if (c.gof.burn_in) return *c.gof.burn_in;
  const std::size_t last = chain.iterations.empty() ? 0 : chain.iterations.back();
  return last / 2;
}

}  // namespace

LoadedData load_data(const RunConfig& c) {
  LoadedData d;
  const auto edges_text = read_file(c.path(c.data.edges));
  const auto nodes_text = read_file(c.path(c.data.nodes));
  d.edges_hash = hash_text(edges_text);
  d.nodes_hash = hash_text(nodes_text);
  std::istringstream edges_in(edges_text), nodes_in(nodes_text);
  const EdgeList edges = read_edge_list(edges_in);
  d.nodes = read_node_table(nodes_in);
  if (static_cast<int>(d.nodes.labels.size()) != edges.n_nodes)
    throw std::invalid_argument("node table has " + std::to_string(d.nodes.labels.size()) + " rows, the edge list " +
                                std::to_string(edges.n_nodes) + " nodes");
  d.stack = stack_from_edge_list(edges);
  std::ostringstream canonical;
  write_stack(canonical, d.stack);
  write_node_table(canonical, d.nodes);
  d.fingerprint = hash_text(canonical.str());
  return d;
}

void cmd_ingest(const CommandOptions& options, std::ostream& log) {
  const RunConfig c = resolve_config(options);
  if (c.data.sponsorships.empty() || c.data.actors.empty())
    throw ConfigError("ingest needs data.sponsorships and data.actors");
  const auto spons_text = read_file(c.path(c.data.sponsorships));
  const auto actors_text = read_file(c.path(c.data.actors));
  std::istringstream spons_in(spons_text), actors_in(actors_text);
  const BipartiteIncidence data = read_incidence(spons_in, actors_in);

  const SimilarityMatrix s = cosine(center_rows(data.entries));
  for (int r : s.zero_rows)
    log << "warning: actor '" << data.actor_labels[static_cast<std::size_t>(r)]
        << "' has a constant sponsorship row; it is isolated\n";
  const ThresholdResult result = density_thresholds(s, c.data.targets);

  const auto dir = output_dir(c);
  std::ostringstream edges;
  write_edge_list(edges, result.weights, static_cast<int>(c.data.targets.size()));
  write_text(dir / "edges.txt", edges.str());
  NodeTable nodes;
  nodes.labels = data.actor_labels;
  nodes.attributes = data.attributes;
  for (const auto& [name, values] : data.attributes) nodes.attribute_order.push_back(name);
  std::ostringstream node_text;
  write_node_table(node_text, nodes);
  write_text(dir / "nodes.csv", node_text.str());
  write_text(dir / "provenance.json", provenance_json(result, data, {hash_text(spons_text), hash_text(actors_text)}) + "\n");

  log << "ingested " << data.n_actors() << " actors x " << data.n_items() << " items\n";
  for (std::size_t k = 0; k < result.targets.size(); ++k)
    log << "layer " << k + 1 << ": density " << result.achieved_density[k] << " (target " << result.targets[k]
        << "), positive fraction " << result.positive_fraction[k] << (result.exact[k] ? "" : " [ties]") << '\n';
}

void cmd_fit(const CommandOptions& options, std::ostream& log) {
  const RunConfig c = resolve_config(options);
  const Prepared p = prepare(c);
  const auto dir = output_dir(c);

  std::vector<McmcConfig> configs;
  for (std::size_t ch = 1; ch <= c.chains; ++ch) {
    McmcConfig m = c.mcmc;
    m.seed = c.chains == 1 ? c.mcmc.seed : derive_seed(c.mcmc.seed, ch);
    configs.push_back(m);
  }
  auto run = [&](const McmcConfig& m) { return fit(p.data.stack, p.data.nodes.attributes, p.lists, p.priors, m); };
  std::vector<Chain> chains;
  if (c.mcmc.threads > 1 && c.chains > 1) {
    std::vector<std::future<Chain>> jobs;
    for (const auto& m : configs) jobs.push_back(std::async(std::launch::async, run, m));
    for (auto& j : jobs) chains.push_back(j.get());
  } else {
    for (const auto& m : configs) chains.push_back(run(m));
  }

  std::ostringstream acceptance;
  acceptance << "chain,layer,proposals,accepts,rate\n";
  ordered_json manifest;
  manifest["command"] = "fit";
  manifest["config_file"] = c.source_path;
  manifest["config_hash"] = hash_text(c.text);
  manifest["config_text"] = c.text;
  manifest["config"] = config_json(c, p.lists, p.priors);
  manifest["input_hashes"] = {{"edges", p.data.edges_hash}, {"nodes", p.data.nodes_hash}};
  manifest["data_fingerprint"] = p.data.fingerprint;
  auto& chain_list = manifest["chains"] = ordered_json::array();
  for (std::size_t ch = 0; ch < chains.size(); ++ch) {
    const Chain& chain = chains[ch];
    const std::string name = "chain_" + std::to_string(ch + 1) + ".csv";
    std::ostringstream csv;
    write_chain_csv(csv, chain);
    write_text(dir / name, csv.str());
    const Eigen::VectorXd rates = chain.acceptance_rates();
    for (Eigen::Index m = 0; m < chain.n_blocks(); ++m)
      acceptance << ch + 1 << ',' << chain.layer_ids[static_cast<std::size_t>(m)] << ','
                 << chain.total_proposals[static_cast<std::size_t>(m)] << ','
                 << chain.total_accepts[static_cast<std::size_t>(m)] << ',' << number(rates(m)) << '\n';
    chain_list.push_back({{"file", name},
                          {"seed", chain.seed},
                          {"fingerprint", chain.fingerprint},
                          {"jitter_events", chain.jitter_events},
                          {"csv_hash", hash_text(csv.str())}});
    log << "chain " << ch + 1 << ": " << chain.size() << " stored draws, acceptance";
    for (Eigen::Index m = 0; m < rates.size(); ++m) log << ' ' << rates(m);
    log << '\n';
  }
  write_text(dir / "acceptance.csv", acceptance.str());
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_simulate(const CommandOptions& options, std::ostream& log) {
  const RunConfig c = resolve_config(options);
  const Prepared p = prepare(c);
  const auto dir = output_dir(c);
  const std::size_t n_sims = options.n_sims.value_or(1);

  std::vector<Eigen::MatrixXd> draws;
  if (!options.chain.empty()) {
    const Chain chain = load_chain(options.chain);
    draws = post_burn_in(chain, burn_in_of(c, chain));
  }
  const auto M = static_cast<Eigen::Index>(p.models.size());
  std::ostringstream stats;
  stats << "sim,layer,statistic,value\n";
  for (std::size_t s = 0; s < n_sims; ++s) {
    Rng rng(derive_seed(c.gof.seed, 2 * s));
    std::vector<Eigen::VectorXd> phis;
    if (draws.empty()) {
      const HyperState hyper = sample_hyperprior(p.priors, rng);
      for (Eigen::Index m = 0; m < M; ++m) phis.push_back(sample_mvn(hyper.mu, hyper.Sigma, rng));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, draws.size() - 1);
      const auto& d = draws[pick(rng)];
      for (Eigen::Index m = 0; m < M; ++m) phis.push_back(d.row(m).transpose());
    }
    SamplerConfig sc;
    sc.n_iters = c.gof.aux_iters;
    sc.seed = derive_seed(c.gof.seed, 2 * s + 1);
    const CascadeDraw draw = simulate_cascade(p.data.stack.layer(1), p.models, phis, sc, &p.data.stack);
    std::ostringstream edges;
    write_stack(edges, draw.stack);
    write_text(dir / ("sim_" + std::to_string(s + 1) + ".txt"), edges.str());
    const auto labels = p.models.front().labels();
    for (std::size_t m = 0; m < draw.stats.size(); ++m)
      for (std::size_t q = 0; q < labels.size(); ++q)
        stats << s + 1 << ',' << m + 2 << ',' << labels[q] << ',' << number(draw.stats[m](static_cast<Eigen::Index>(q)))
              << '\n';
  }
  write_text(dir / "simulated_stats.csv", stats.str());
  log << "simulated " << n_sims << " stacks from the " << (draws.empty() ? "prior" : "posterior") << '\n';
}

void cmd_gof(const CommandOptions& options, std::ostream& log) {
  const RunConfig c = resolve_config(options);
  const Prepared p = prepare(c);
  const fs::path chain_file = chain_path(options, c);
  const fs::path manifest_file = chain_file.parent_path() / "manifest.json";
  auto manifest_in = open_in(manifest_file.string(), "manifest");
  const auto manifest = nlohmann::json::parse(manifest_in);
  const auto recorded = manifest.value("data_fingerprint", std::string{});
  if (recorded != p.data.fingerprint)
    throw std::invalid_argument("data fingerprint mismatch: chain was fitted to " + recorded + ", data is " +
                                p.data.fingerprint);

  const Chain chain = load_chain(chain_file);
  if (chain.size() == 0) throw std::invalid_argument("the chain is empty");
  const auto draws = post_burn_in(chain, burn_in_of(c, chain));

  PredictiveConfig pc;
  pc.n_sims = c.gof.n_sims;
  pc.aux_iters = c.gof.aux_iters;
  pc.seed = c.gof.seed;
  pc.threads = c.mcmc.threads;
  const BinaryLayer& x1 = p.data.stack.layer(1);
  const ObservedSummary observed = observe(p.data.stack, p.models);
  const auto dir = output_dir(c);

  auto emit = [&](const PredictiveEnsemble& ensemble, const std::string& name) {
    const GofReport report = gof_report(ensemble, observed, name);
    write_text(dir / ("gof_" + name + ".json"), report_json(report) + "\n");
    std::ostringstream csv;
    write_report_csv(csv, report);
    write_text(dir / ("gof_" + name + ".csv"), csv.str());
    std::size_t contained = 0;
    for (const auto& b : report.statistics) contained += b.contained;
    log << name << " predictive: " << contained << "/" << report.statistics.size()
        << " statistics inside the 95% band" << (report.degenerate ? " (degenerate: 1 simulation)" : "") << '\n';
  };
  pc.seed = derive_seed(c.gof.seed, 1);
  emit(prior_predictive(x1, p.models, p.priors, pc, &p.data.stack), "prior");
  pc.seed = derive_seed(c.gof.seed, 2);
  emit(posterior_predictive(draws, x1, p.models, pc, &p.data.stack), "posterior");
}

void cmd_diagnose(const CommandOptions& options, std::ostream& log) {
  RunConfig c = resolve_config(options);
  const fs::path chain_file = chain_path(options, c);
  auto in = open_in(chain_file.string(), "chain");
  const ChainTable table = read_chain_table(in);
  if (table.values.rows() == 0) throw std::invalid_argument("the chain is empty");
  if (options.out.empty()) c.output = chain_file.parent_path().string();
  const auto dir = output_dir(c);
  const std::size_t burn_in = options.burn_in.value_or(0);

  const Eigen::Index iter_col = table.column("iter");
  std::vector<Eigen::Index> rows;
  for (Eigen::Index r = 0; r < table.values.rows(); ++r)
    if (table.values(r, iter_col) > static_cast<double>(burn_in)) rows.push_back(r);

  std::ostringstream ess_csv;
  ess_csv << "parameter,draws,ess,degenerate\n";
  std::size_t flagged = 0;
  for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(table.columns.size()); ++col) {
    const auto& name = table.columns[static_cast<std::size_t>(col)];
    if (name == "iter" || name.rfind("accept[", 0) == 0 || name.rfind("gamma[", 0) == 0) continue;
    std::vector<double> series;
    for (auto r : rows) series.push_back(table.values(r, col));
    if (series.size() < 10) {
      ess_csv << csv_field(name) << ',' << series.size() << ",,insufficient\n";
      continue;
    }
    const EssResult e = ess(series);
    flagged += e.degenerate;
    ess_csv << csv_field(name) << ',' << series.size() << ',' << number(e.ess) << ',' << (e.degenerate ? "true" : "false") << '\n';
  }
  write_text(dir / "ess.csv", ess_csv.str());

  // Acceptance over every post-initial row, independent of burn-in and thinning.
  std::ostringstream acc_csv;
  acc_csv << "layer,stored_draws,accept_rate\n";
  for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(table.columns.size()); ++col) {
    const auto& name = table.columns[static_cast<std::size_t>(col)];
    if (name.rfind("accept[", 0) != 0) continue;
    double sum = 0.0;
    std::size_t n = 0;
    for (Eigen::Index r = 0; r < table.values.rows(); ++r)
      if (table.values(r, iter_col) > 0) sum += table.values(r, col), ++n;
    const std::string layer = name.substr(7, name.size() - 8);
    acc_csv << layer << ',' << n << ',' << (n ? number(sum / static_cast<double>(n)) : std::string("")) << '\n';
    log << "layer " << layer << " acceptance " << (n ? sum / static_cast<double>(n) : 0.0) << '\n';
  }
  write_text(dir / "acceptance_by_layer.csv", acc_csv.str());

  std::ostringstream trace;
  trace << "iter,parameter,value\n";
  for (Eigen::Index r = 0; r < table.values.rows(); ++r)
    for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(table.columns.size()); ++col) {
      if (col == iter_col) continue;
      trace << static_cast<long long>(table.values(r, iter_col)) << ',' << csv_field(table.columns[static_cast<std::size_t>(col)])
            << ',' << number(table.values(r, col)) << '\n';
    }
  write_text(dir / "trace.csv", trace.str());
  log << "diagnosed " << rows.size() << " draws after burn-in " << burn_in;
  if (flagged) log << "; " << flagged << " constant column(s)";
  log << '\n';
}

std::string error_json(const std::string& command, const std::exception& e) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["error"] = e.what();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["type"] = "parse_error";
    j["line"] = pe->line();
  } else if (dynamic_cast<const ConfigError*>(&e)) {
    j["type"] = "config_error";
  } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
    j["type"] = "invalid_argument";
  } else {
    j["type"] = "runtime_error";
  }
  return j.dump();
}

std::string usage_error_json(const std::string& message) {
  return nlohmann::ordered_json{{"error", message}, {"type", "usage_error"}}.dump();
}

}  // namespace mlergm::cli
