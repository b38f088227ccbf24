#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "synthetic.hpp"

using namespace mlergm::cli;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = 0;
  std::string err;
};

RunResult run_binary(const std::string& args, const fs::path& dir) {
  const auto err_file = dir / "stderr.txt";
  const std::string cmd = std::string(MLERGM_BIN) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                          err_file.string();
  const int raw = std::system(cmd.c_str());
  std::ifstream in(err_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto p = dir / "config.yaml";
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ingest then fit in process, reproducibly") {
    const auto dir = synth::scratch("cli_fit");
    const auto files = synth::write_sponsorships(dir, 12, 60, 1);
    const auto cfg = write_config(dir, "data:\n  sponsorships: sponsorships.csv\n  actors: actors.csv\n"
                                       "  edges: data/edges.txt\n  nodes: data/nodes.csv\n"
                                       "mcmc: {iterations: 30, t_start: 10, adapt_every: 5, aux_iters: 100}\n");
    std::ostringstream log;
    CommandOptions ingest{cfg.string(), {}, (dir / "data").string(), {}, {}, {}, {}};
    cmd_ingest(ingest, log);
    CHECK(fs::exists(dir / "data" / "edges.txt"));
    CHECK(fs::exists(dir / "data" / "provenance.json"));

    CommandOptions fit{cfg.string(), 3, (dir / "a").string(), {}, {}, {}, {}};
    cmd_fit(fit, log);
    fit.out = (dir / "b").string();
    cmd_fit(fit, log);
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    CHECK(slurp(dir / "a" / "chain_1.csv") == slurp(dir / "b" / "chain_1.csv"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["command"] == "fit");
    CHECK(manifest["chains"].size() == 1);

    CommandOptions diag{cfg.string(), {}, {}, {}, (dir / "a" / "chain_1.csv").string(), {}, {}};
    cmd_diagnose(diag, log);
    CHECK(fs::exists(dir / "a" / "ess.csv"));
    CHECK(fs::exists(dir / "a" / "trace.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("gof refuses a chain fitted to different data") {
    const auto dir = synth::scratch("cli_mismatch");
    synth::write_sponsorships(dir, 10, 40, 2);
    const auto cfg = write_config(dir, "data:\n  sponsorships: sponsorships.csv\n  actors: actors.csv\n"
                                       "  edges: data/edges.txt\n  nodes: data/nodes.csv\n"
                                       "mcmc: {iterations: 10, t_start: 4, adapt_every: 2, aux_iters: 50}\n"
                                       "gof: {n_sims: 2, aux_iters: 50}\n");
    std::ostringstream log;
    cmd_ingest({cfg.string(), {}, (dir / "data").string(), {}, {}, {}, {}}, log);
    cmd_fit({cfg.string(), 1, (dir / "fit").string(), {}, {}, {}, {}}, log);
    synth::write_sponsorships(dir, 10, 40, 3);
    cmd_ingest({cfg.string(), {}, (dir / "data").string(), {}, {}, {}, {}}, log);
    CHECK_THROWS_WITH(
        cmd_gof({cfg.string(), {}, (dir / "gof").string(), {}, (dir / "fit" / "chain_1.csv").string(), {}, {}}, log),
        doctest::Contains("fingerprint mismatch"));
    fs::remove_all(dir);
  }

  TEST_CASE("ingest is idempotent; gof handles degenerate and empty cases") {
    const auto dir = synth::scratch("cli_idem");
    synth::write_sponsorships(dir, 10, 40, 4);
    const auto cfg = write_config(dir, "data:\n  sponsorships: sponsorships.csv\n  actors: actors.csv\n"
                                       "  edges: data/edges.txt\n  nodes: data/nodes.csv\n"
                                       "mcmc: {iterations: 12, t_start: 4, adapt_every: 2, aux_iters: 50}\n"
                                       "gof: {aux_iters: 50}\n");
    std::ostringstream log;
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    cmd_ingest({cfg.string(), {}, (dir / "data").string(), {}, {}, {}, {}}, log);
    const auto first = slurp(dir / "data" / "edges.txt") + slurp(dir / "data" / "provenance.json");
    cmd_ingest({cfg.string(), {}, (dir / "data").string(), {}, {}, {}, {}}, log);
    CHECK(first == slurp(dir / "data" / "edges.txt") + slurp(dir / "data" / "provenance.json"));

    cmd_fit({cfg.string(), 1, (dir / "fit").string(), {}, {}, {}, {}}, log);
    const auto chain = (dir / "fit" / "chain_1.csv").string();
    cmd_gof({cfg.string(), {}, (dir / "gof").string(), {}, chain, 1, {}}, log);
    CHECK(nlohmann::json::parse(slurp(dir / "gof" / "gof_posterior.json"))["degenerate"] == true);
    CHECK_THROWS_WITH(cmd_gof({cfg.string(), {}, (dir / "gof").string(), {}, chain, 1, 12}, log),
                      doctest::Contains("no stored draws"));
    fs::remove_all(dir);
  }

  TEST_CASE("diagnose flags constant columns and keeps ESS within the draw count") {
    const auto dir = synth::scratch("cli_diag");
    std::ofstream csv(dir / "chain.csv");
    csv << "iter,phi[2].a,mu.a,\"Sigma[1,1]\",accept[2],gamma[2]\n";
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (int t = 0; t <= 60; ++t) csv << t << ",1.5," << z(rng) << ',' << 1.0 + 0.01 * z(rng) << ",1,0.1\n";
    csv.close();
    std::ostringstream log;
    cmd_diagnose({{}, {}, {}, {}, (dir / "chain.csv").string(), {}, {}}, log);
    std::ifstream in(dir / "ess.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      if (line.rfind("phi[2].a,", 0) == 0) CHECK(line.find("true") != std::string::npos);
      const auto first = line.find("\",") != std::string::npos ? line.find("\",") + 2 : line.find(',') + 1;
      const auto second = line.find(',', first);
      const double draws = std::stod(line.substr(first, second - first));
      const double e = std::stod(line.substr(second + 1));
      CHECK(e <= draws);
    }
    CHECK(rows == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("binary reports errors as JSON with a nonzero exit") {
    const auto dir = synth::scratch("cli_errors");
    auto r = run_binary("fit --config " + (dir / "missing.yaml").string(), dir);
    CHECK(r.status != 0);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["command"] == "fit");
    CHECK(j.contains("error"));

    const auto bad = write_config(dir, "mcmc: {iterationz: 3}\n");
    r = run_binary("fit --config " + bad.string(), dir);
    CHECK(r.status != 0);
    j = nlohmann::json::parse(r.err);
    CHECK(j["type"] == "config_error");
    CHECK(j["error"].get<std::string>().find("iterationz") != std::string::npos);

    std::ofstream(dir / "edges.txt") << "2 2\n0 1 1\n0 1 x\n";
    std::ofstream(dir / "nodes.csv") << "label,party\n1,R\n2,D\n";
    const auto cfg = write_config(dir, "data: {edges: edges.txt, nodes: nodes.csv}\n");
    r = run_binary("fit --config " + cfg.string(), dir);
    CHECK(r.status != 0);
    j = nlohmann::json::parse(r.err);
    CHECK(j["type"] == "parse_error");
    CHECK(j["line"] == 3);

    r = run_binary("frobnicate", dir);
    CHECK(r.status != 0);
    CHECK(nlohmann::json::parse(r.err).contains("error"));
    fs::remove_all(dir);
  }
}
