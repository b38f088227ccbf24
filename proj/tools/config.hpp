#pragma once

// Run configuration: a YAML file with data, model, prior, mcmc, gof and
// output sections. Every field has a default equal to the Senate application
// settings, so an empty section means "as published".

#include <string>
#include <vector>

#include "mlergm/exchange.hpp"
#include "mlergm/hyper.hpp"
#include "mlergm/statistics.hpp"

namespace mlergm::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataConfig {
  std::string edges = "edges.txt";
  std::string nodes = "nodes.csv";
  std::string sponsorships;
  std::string actors;
  std::vector<double> targets{0.25, 0.15, 0.10, 0.05};
};

struct ModelConfig {
  StatisticList statistics;    // shared list; alpha below fills geometric kinds
  std::vector<double> alpha;   // one per transition k = 2..K
  std::vector<StatisticList> layers;  // explicit per-transition lists (override)

  /// Per-transition lists for a K-layer stack. Throws ConfigError if neither
  /// form yields K - 1 lists.
  std::vector<StatisticList> resolve(int n_layers) const;
};

struct PriorConfig {
  Eigen::VectorXd mu0;      // empty: zeros
  Eigen::MatrixXd Sigma0;   // empty: sigma0_scale * I
  double sigma0_scale = 4.0;
  double nu0 = 12.0;
  Eigen::MatrixXd S0;
  double s0_scale = 1.0;

  HyperPriors resolve(Eigen::Index p) const;
};

struct GofConfig {
  std::size_t n_sims = 1000;
  std::size_t aux_iters = 5000;
  std::optional<std::size_t> burn_in;  // stored iterations <= burn_in are dropped; default T/2
  std::uint64_t seed = 7;
};

struct RunConfig {
  std::string source_path;  // directory relative paths resolve against
  std::string text;         // raw file contents
  DataConfig data;
  ModelConfig model;
  PriorConfig prior;
  McmcConfig mcmc;
  std::size_t chains = 1;
  GofConfig gof;
  std::string output = "out";

  /// Resolves a data path against the config file's directory.
  std::string path(const std::string& p) const;
};

/// Parses YAML text. `source` is the file the text came from (for relative
/// paths). Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text, const std::string& source = {});
RunConfig load_config(const std::string& path);

/// Defaults only: the Senate application settings.
RunConfig default_config();

}  // namespace mlergm::cli
