#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsekit/cli.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/matrix_io.hpp"

#ifndef SPARSEKIT_VERSION
#define SPARSEKIT_VERSION "dev"
#endif

namespace sparsekit::cli {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string manifest;
  std::string out_dir;
  int jobs = 0;
  std::uint64_t seed = 0;
  bool full = false;

  std::string matrix;
  std::string signal;
  std::string solver;
  std::vector<std::string> params;
  Index k = -1;
  Index k_max = -1;
  Index ric_order = -1;
  Index nsp_order = -1;
  int trials = 0;
  int iterations = -1;
  Index n = 0;
  int resolution = 0;
  std::vector<std::string> solvers;
  std::vector<std::string> algorithms;
};

Json read_json(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(std::string("cannot open ") + what + " " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw InvalidArgument("--param " + key + ": '" + text + "' is not a number");
  return v;
}

// Flags become one more JSON layer so they go through the same validation.
Json flag_overrides(const Flags& f, const CLI::App& sub) {
  Json j = Json::object();
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--out-dir")) j["out_dir"] = f.out_dir;
  if (given("--jobs")) j["jobs"] = f.jobs;
  if (given("--seed")) j["seed"] = f.seed;
  if (given("--full")) j["scale"] = "full";
  if (given("--matrix")) j["matrix"] = f.matrix;
  if (given("--signal")) j["signal"] = f.signal;
  if (given("--solver")) j["solver"] = f.solver;
  if (given("--k-max")) j["k_max"] = f.k_max;
  if (given("--ric-order")) j["ric_max_order"] = f.ric_order;
  if (given("--nsp-order")) j["nsp_max_order"] = f.nsp_order;
  if (given("--trials")) j["trials"] = f.trials;
  if (given("--iterations")) j["iterations"] = f.iterations;
  if (given("--n")) j["n"] = f.n;
  if (given("--resolution")) j["resolution"] = f.resolution;
  if (given("--solvers")) j["solvers"] = f.solvers;
  if (given("--algorithms")) j["algorithms"] = f.algorithms;
  if (given("--k") || given("--param")) {
    Json p = Json::object();
    if (given("--k")) p["k"] = f.k;
    for (const auto& kv : f.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw InvalidArgument("--param expects key=value, got '" + kv + "'");
      p[kv.substr(0, eq)] = parse_number(kv.substr(0, eq), kv.substr(eq + 1));
    }
    j["params"] = p;
  }
  return j;
}

Json env_overrides() {
  Json j = Json::object();
  if (const char* dir = std::getenv("SPARSEKIT_OUT_DIR"); dir && *dir) j["out_dir"] = dir;
  if (const char* jobs = std::getenv("SPARSEKIT_JOBS"); jobs && *jobs) {
    char* end = nullptr;
    const long v = std::strtol(jobs, &end, 10);
    if (*end != '\0' || v < 1) throw InvalidArgument("SPARSEKIT_JOBS must be a positive integer");
    j["jobs"] = v;
  }
  return j;
}

RunConfig resolve(const std::string& command, const Flags& f, const CLI::App& sub) {
  RunConfig cfg = default_config(command);
  if (!f.manifest.empty()) {
    const Json m = read_json(f.manifest, "manifest");
    if (!m.is_object() || !m.contains("config")) throw InvalidArgument("manifest " + f.manifest + " has no config");
    apply_config(cfg, m.at("config"));
  }
  if (!f.config.empty()) apply_config(cfg, read_json(f.config, "config"));
  // Environment overrides the files; flags override everything.
  Json env = env_overrides();
  if (command != "phase" && command != "dictlearn") env.erase("jobs");
  apply_config(cfg, env);
  apply_config(cfg, flag_overrides(f, sub));
  return cfg;
}

void write_artifacts(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) atomic_write(dir / name, content);
}

int execute(const RunConfig& cfg, std::ostream& out) {
  const std::string& c = cfg.command;
  const std::string manifest_text = dump(manifest(cfg));
  if (c == "analyze") {
    if (cfg.analyze.matrix.empty()) throw InvalidArgument("analyze: --matrix is required");
    const Frame phi = load_matrix(cfg.analyze.matrix);
    const std::string report = dump(to_json(analyze_frame(phi, cfg.analyze.report)));
    out << report;
    if (!cfg.out_dir.empty()) write_artifacts(cfg.out_dir, {{"report.json", report}, {"manifest.json", manifest_text}});
    return kOk;
  }
  if (c == "recover" || c == "oracle") {
    const std::string& mpath = c == "recover" ? cfg.recover.matrix : cfg.oracle.matrix;
    const std::string& spath = c == "recover" ? cfg.recover.signal : cfg.oracle.signal;
    if (mpath.empty() || spath.empty()) throw InvalidArgument(c + ": --matrix and --signal are required");
    const Frame phi = load_matrix(mpath);
    const Vector s = load_vector(spath);
    if (s.size() != phi.rows()) throw InvalidArgument(c + ": signal length does not match matrix rows");
    const RecoveryResult r = c == "recover"
                                 ? find_solver(cfg.recover.solver).run(phi, s, cfg.recover.params)
                                 : exhaustive_p0(phi, s, cfg.oracle.k_max, cfg.oracle.limits);
    const std::string text = dump(to_json(r));
    out << text;
    if (!cfg.out_dir.empty()) write_artifacts(cfg.out_dir, {{"result.json", text}, {"manifest.json", manifest_text}});
    return kOk;
  }
  const fs::path dir = cfg.out_dir.empty() ? fs::path("sparsekit_out") : fs::path(cfg.out_dir);
  if (c == "phase") {
    const auto cells = phase_grid(cfg.phase);
    std::vector<std::pair<std::string, std::string>> files{
        {"cells.csv", cells_csv(cells, cfg.phase.solvers)},
        {"volumes.json", dump(volumes_json(cells, cfg.phase.solvers))},
    };
    for (const auto& s : cfg.phase.solvers) files.emplace_back("heatmap_" + s + ".svg", phase_heatmap_svg(cells, cfg.phase, s));
    files.emplace_back("manifest.json", manifest_text);
    write_artifacts(dir, files);
    const auto scores = volume_scores(cells, cfg.phase.solvers);
    for (const auto& s : cfg.phase.solvers) out << s << " volume " << scores.at(s) << '\n';
    out << "wrote " << dir.string() << '\n';
    return kOk;
  }
  // dictlearn
  const SynthReport report = synth_dict_experiment(cfg.dictlearn);
  write_artifacts(dir, {{"learn_curves.csv", learn_curves_csv(cfg.dictlearn, report)},
                        {"atoms_table.csv", atoms_table_csv(cfg.dictlearn, report)},
                        {"dictlearn.json", dump(to_json(cfg.dictlearn, report))},
                        {"manifest.json", manifest_text}});
  for (const auto& s : report.summaries) {
    out << noise_label(cfg.dictlearn.noise_snr_db[s.noise_index]) << ' ' << to_string(s.algorithm) << " atoms "
        << s.mean_atoms << " final_e_snr " << s.mean_final_e_snr << '\n';
  }
  out << "wrote " << dir.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery and dictionary learning toolkit", "sparsekit"};
  app.set_version_flag("--version", SPARSEKIT_VERSION);
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--manifest", f.manifest, "re-run the config stored in a manifest.json");
    sub->add_option("--out-dir", f.out_dir, "output directory (env SPARSEKIT_OUT_DIR)");
  };
  auto experiment = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--jobs", f.jobs, "concurrent tasks (env SPARSEKIT_JOBS)");
    sub->add_flag("--full", f.full, "full-scale preset instead of desk scale");
    sub->add_option("--trials", f.trials, "trials per cell");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "frame diagnostics as JSON");
  common(analyze);
  analyze->add_option("--matrix", f.matrix, "CSV frame");
  analyze->add_option("--ric-order", f.ric_order, "largest k for the RIC table");
  analyze->add_option("--nsp-order", f.nsp_order, "largest k for the NSP table");

  CLI::App* recover = app.add_subcommand("recover", "one sparse recovery as JSON");
  common(recover);
  recover->add_option("--matrix", f.matrix, "CSV frame");
  recover->add_option("--signal", f.signal, "CSV signal (one row or one column)");
  recover->add_option("--solver", f.solver, "solver name");
  recover->add_option("--k", f.k, "sparsity target (greedy, exhaustive)");
  recover->add_option("--param", f.params, "solver parameter key=value")->take_all();

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive l0 search as JSON");
  common(oracle);
  oracle->add_option("--matrix", f.matrix, "CSV frame");
  oracle->add_option("--signal", f.signal, "CSV signal");
  oracle->add_option("--k-max", f.k_max, "largest support size");

  CLI::App* phase = app.add_subcommand("phase", "phase-transition grid");
  experiment(phase);
  phase->add_option("--n", f.n, "signal length");
  phase->add_option("--resolution", f.resolution, "cells per axis");
  phase->add_option("--solvers", f.solvers, "solver names")->delimiter(',');

  CLI::App* dict = app.add_subcommand("dictlearn", "synthetic dictionary-learning study");
  experiment(dict);
  dict->add_option("--iterations", f.iterations, "learning iterations T");
  dict->add_option("--algorithms", f.algorithms, "mod, ksvd, rsvd")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const RunConfig cfg = resolve(sub->get_name(), f, *sub);
    return execute(cfg, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace sparsekit::cli
