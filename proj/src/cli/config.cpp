#include <fstream>

#include "sparsekit/cli.hpp"
#include "sparsekit/errors.hpp"

namespace sparsekit::cli {
namespace {

const std::vector<std::string> kCommands{"analyze", "recover", "phase", "dictlearn", "oracle"};

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw InvalidArgument("config key '" + key + "': expected " + expected);
}

std::int64_t as_int(const std::string& key, const Json& v) {
  if (!v.is_number_integer()) bad_type(key, "an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_seed(const std::string& key, const Json& v) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    bad_type(key, "a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double as_double(const std::string& key, const Json& v) {
  if (!v.is_number()) bad_type(key, "a number");
  return v.get<double>();
}

std::string as_string(const std::string& key, const Json& v) {
  if (!v.is_string()) bad_type(key, "a string");
  return v.get<std::string>();
}

std::vector<std::string> as_strings(const std::string& key, const Json& v) {
  if (!v.is_array()) bad_type(key, "an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(key, e));
  return out;
}

void apply_scale(RunConfig& cfg, const std::string& scale) {
  if (scale == "desk") {
    cfg.full_scale = false;
  } else if (scale == "full") {
    cfg.full_scale = true;
    const PhaseConfig full = PhaseConfig::full_scale();
    cfg.phase.n = full.n;
    cfg.phase.trials = full.trials;
    cfg.dictlearn.examples = 10'000;
  } else {
    throw InvalidArgument("config key 'scale': expected \"desk\" or \"full\"");
  }
}

void apply_key(RunConfig& cfg, const std::string& key, const Json& v) {
  const std::string& c = cfg.command;
  if (key == "command") {
    if (as_string(key, v) != c) throw InvalidArgument("config key 'command': file is for '" + v.get<std::string>() + "'");
  } else if (key == "out_dir") {
    cfg.out_dir = as_string(key, v);
  } else if (key == "jobs") {
    const auto j = as_int(key, v);
    if (j < 1) throw InvalidArgument("config key 'jobs': must be >= 1");
    cfg.phase.jobs = cfg.dictlearn.jobs = static_cast<int>(j);
  } else if (key == "scale" && (c == "phase" || c == "dictlearn")) {
    apply_scale(cfg, as_string(key, v));
  } else if (c == "analyze") {
    if (key == "matrix") cfg.analyze.matrix = as_string(key, v);
    else if (key == "ric_max_order") cfg.analyze.report.ric_max_order = as_int(key, v);
    else if (key == "nsp_max_order") cfg.analyze.report.nsp_max_order = as_int(key, v);
    else if (key == "max_columns") cfg.analyze.report.limits.max_columns = as_int(key, v);
    else if (key == "max_subsets") cfg.analyze.report.limits.max_subsets = static_cast<std::uint64_t>(as_seed(key, v));
    else throw InvalidArgument("unknown config key '" + key + "' for analyze");
  } else if (c == "recover") {
    if (key == "matrix") cfg.recover.matrix = as_string(key, v);
    else if (key == "signal") cfg.recover.signal = as_string(key, v);
    else if (key == "solver") cfg.recover.solver = as_string(key, v);
    else if (key == "params") {
      if (!v.is_object()) bad_type(key, "an object of numbers");
      for (const auto& [name, value] : v.items()) cfg.recover.params[name] = as_double("params." + name, value);
    } else {
      throw InvalidArgument("unknown config key '" + key + "' for recover");
    }
  } else if (c == "oracle") {
    if (key == "matrix") cfg.oracle.matrix = as_string(key, v);
    else if (key == "signal") cfg.oracle.signal = as_string(key, v);
    else if (key == "k_max") cfg.oracle.k_max = as_int(key, v);
    else if (key == "max_supports") cfg.oracle.limits.max_supports = as_seed(key, v);
    else throw InvalidArgument("unknown config key '" + key + "' for oracle");
  } else if (c == "phase") {
    PhaseConfig& p = cfg.phase;
    if (key == "n") p.n = as_int(key, v);
    else if (key == "resolution") p.resolution = static_cast<int>(as_int(key, v));
    else if (key == "delta_min") p.delta_min = as_double(key, v);
    else if (key == "delta_max") p.delta_max = as_double(key, v);
    else if (key == "rho_min") p.rho_min = as_double(key, v);
    else if (key == "rho_max") p.rho_max = as_double(key, v);
    else if (key == "trials") p.trials = static_cast<int>(as_int(key, v));
    else if (key == "solvers") p.solvers = as_strings(key, v);
    else if (key == "seed") p.seed = as_seed(key, v);
    else throw InvalidArgument("unknown config key '" + key + "' for phase");
  } else if (c == "dictlearn") {
    SynthDictConfig& d = cfg.dictlearn;
    if (key == "n") d.n = as_int(key, v);
    else if (key == "m") d.m = as_int(key, v);
    else if (key == "k") d.k = as_int(key, v);
    else if (key == "examples") d.examples = as_int(key, v);
    else if (key == "iterations") d.iterations = static_cast<int>(as_int(key, v));
    else if (key == "trials") d.trials = static_cast<int>(as_int(key, v));
    else if (key == "group_size") d.group_size = as_int(key, v);
    else if (key == "coder") d.coder = as_string(key, v);
    else if (key == "seed") d.seed = as_seed(key, v);
    else if (key == "algorithms") {
      d.algorithms.clear();
      for (const auto& name : as_strings(key, v)) d.algorithms.push_back(parse_dict_algorithm(name));
    } else if (key == "noise_snr_db") {
      if (!v.is_array()) bad_type(key, "an array of numbers or null");
      d.noise_snr_db.clear();
      for (const auto& e : v) {
        if (e.is_null()) d.noise_snr_db.emplace_back(std::nullopt);
        else d.noise_snr_db.emplace_back(as_double(key, e));
      }
    } else {
      throw InvalidArgument("unknown config key '" + key + "' for dictlearn");
    }
  }
}

void validate(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "phase") cfg.phase.validate();
  if (c == "dictlearn") cfg.dictlearn.validate();
  if (c == "recover") check_solver_params(find_solver(cfg.recover.solver), cfg.recover.params);
  if (c == "analyze" && (cfg.analyze.report.ric_max_order < 0 || cfg.analyze.report.nsp_max_order < 0)) {
    throw InvalidArgument("analyze: orders must be >= 0");
  }
  if (c == "oracle" && cfg.oracle.k_max < 0) throw InvalidArgument("oracle: k_max must be >= 0");
}

}  // namespace

RunConfig default_config(const std::string& command) {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw InvalidArgument("unknown command '" + command + "' (valid: analyze, recover, phase, dictlearn, oracle)");
  }
  RunConfig cfg;
  cfg.command = command;
  return cfg;
}

void apply_config(RunConfig& cfg, const Json& config) {
  if (!config.is_object()) throw InvalidArgument("config must be a JSON object");
  // Scale first so explicit keys override its defaults.
  if (config.contains("scale")) apply_key(cfg, "scale", config.at("scale"));
  for (const auto& [key, value] : config.items()) {
    if (key != "scale") apply_key(cfg, key, value);
  }
  validate(cfg);
}

RunConfig parse_config(const std::string& command, const Json& config) {
  RunConfig cfg = default_config(command);
  apply_config(cfg, config);
  return cfg;
}

RunConfig parse_config_file(const std::string& command, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return parse_config(command, j);
}

Json RunConfig::resolved() const {
  Json j;
  j["command"] = command;
  if (command == "analyze") {
    j["matrix"] = analyze.matrix;
    j["ric_max_order"] = analyze.report.ric_max_order;
    j["nsp_max_order"] = analyze.report.nsp_max_order;
    j["max_columns"] = analyze.report.limits.max_columns;
    j["max_subsets"] = analyze.report.limits.max_subsets;
  } else if (command == "recover") {
    j["matrix"] = recover.matrix;
    j["signal"] = recover.signal;
    j["solver"] = recover.solver;
    Json p = Json::object();
    for (const auto& [k, v] : recover.params) p[k] = v;
    j["params"] = p;
  } else if (command == "oracle") {
    j["matrix"] = oracle.matrix;
    j["signal"] = oracle.signal;
    j["k_max"] = oracle.k_max;
    j["max_supports"] = oracle.limits.max_supports;
  } else if (command == "phase") {
    j["scale"] = full_scale ? "full" : "desk";
    j["n"] = phase.n;
    j["resolution"] = phase.resolution;
    j["delta_min"] = phase.delta_min;
    j["delta_max"] = phase.delta_max;
    j["rho_min"] = phase.rho_min;
    j["rho_max"] = phase.rho_max;
    j["trials"] = phase.trials;
    j["solvers"] = phase.solvers;
    j["seed"] = phase.seed;
  } else if (command == "dictlearn") {
    j["scale"] = full_scale ? "full" : "desk";
    j["n"] = dictlearn.n;
    j["m"] = dictlearn.m;
    j["k"] = dictlearn.k;
    j["examples"] = dictlearn.examples;
    j["iterations"] = dictlearn.iterations;
    Json noise = Json::array();
    for (const auto& s : dictlearn.noise_snr_db) noise.push_back(s ? Json(*s) : Json(nullptr));
    j["noise_snr_db"] = noise;
    j["trials"] = dictlearn.trials;
    Json algs = Json::array();
    for (auto a : dictlearn.algorithms) algs.push_back(std::string(to_string(a)));
    j["algorithms"] = algs;
    j["group_size"] = dictlearn.group_size;
    j["coder"] = dictlearn.coder;
    j["seed"] = dictlearn.seed;
  }
  return j;
}

}  // namespace sparsekit::cli
