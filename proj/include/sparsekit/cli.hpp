#pragma once
// Batch front end. Every subcommand can be driven by flags, a JSON config, or
// a manifest written by an earlier run.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsekit/experiments.hpp"
#include "sparsekit/frame_analysis.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kUsage = 1, kFailure = 2 };

struct AnalyzeConfig {
  std::string matrix;
  ReportOptions report;
};

struct RecoverConfig {
  std::string matrix;
  std::string signal;
  std::string solver = "omp";
  SolverParams params;
};

struct OracleConfig {
  std::string matrix;
  std::string signal;
  Index k_max = 2;
  P0Limits limits;
};

struct RunConfig {
  std::string command;  // analyze | recover | phase | dictlearn | oracle
  bool full_scale = false;
  std::string out_dir;  // empty: standard output only (analyze, recover, oracle) or "sparsekit_out"
  AnalyzeConfig analyze;
  RecoverConfig recover;
  OracleConfig oracle;
  PhaseConfig phase;
  SynthDictConfig dictlearn;

  /// Resolved settings that determine the output; the manifest stores this.
  /// Job count and output directory are left out since they do not change
  /// any result.
  Json resolved() const;
};

/// Defaults for `command`, then the keys of `config` applied on top. Unknown
/// keys and type mismatches throw InvalidArgument naming the key.
RunConfig parse_config(const std::string& command, const Json& config);
RunConfig default_config(const std::string& command);
void apply_config(RunConfig& cfg, const Json& config);
RunConfig parse_config_file(const std::string& command, const std::filesystem::path& path);

Json to_json(const FrameReport& report);
Json to_json(const RecoveryResult& result);
Json to_json(const SynthDictConfig& cfg, const SynthReport& report);
Json volumes_json(const std::vector<PhaseCell>& cells, const std::vector<std::string>& solvers);
Json manifest(const RunConfig& cfg);

/// Canonical text for JSON artifacts: two-space indent, trailing newline.
std::string dump(const Json& j);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparsekit::cli
