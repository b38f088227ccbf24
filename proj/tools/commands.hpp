#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "mlergm/io.hpp"

namespace mlergm::cli {

struct CommandOptions {
  std::string config;                  // --config
  std::optional<std::uint64_t> seed;   // --seed, overrides mcmc.seed / gof.seed
  std::string out;                     // --out, overrides output.dir
  std::optional<std::size_t> chains;   // --chains
  std::string chain;                   // --chain (gof, simulate, diagnose)
  std::optional<std::size_t> n_sims;   // --n-sims (gof, simulate)
  std::optional<std::size_t> burn_in;  // --burn-in (gof, simulate, diagnose)
};

struct LoadedData {
  LayerStack stack;
  NodeTable nodes;
  std::string edges_hash;
  std::string nodes_hash;
  std::string fingerprint;  // canonical stack and node table
};

LoadedData load_data(const RunConfig& config);

/// Each command writes its artifacts under the output directory and a short
/// summary to `log`. Failures throw.
void cmd_ingest(const CommandOptions& options, std::ostream& log);
void cmd_fit(const CommandOptions& options, std::ostream& log);
void cmd_simulate(const CommandOptions& options, std::ostream& log);
void cmd_gof(const CommandOptions& options, std::ostream& log);
void cmd_diagnose(const CommandOptions& options, std::ostream& log);

/// {"error": ..., "type": ..., ["line": ...]} for stderr.
std::string error_json(const std::string& command, const std::exception& e);
std::string usage_error_json(const std::string& message);

}  // namespace mlergm::cli
