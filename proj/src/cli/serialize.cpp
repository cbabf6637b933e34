#include <cmath>

#include "sparsekit/cli.hpp"

#ifndef SPARSEKIT_VERSION
#define SPARSEKIT_VERSION "dev"
#endif

namespace sparsekit::cli {
namespace {

// JSON has no infinity; unbounded measures are written as null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const FrameReport& r) {
  Json j;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["coherence"] = num(r.coherence);
  j["welch_bound"] = r.welch ? num(*r.welch) : Json(nullptr);
  j["gershgorin_bound"] = num(r.gershgorin_bound);
  j["spark"] = r.spark ? Json(*r.spark) : Json(nullptr);
  j["krank"] = r.krank ? Json(*r.krank) : Json(nullptr);
  Json ric = Json::object();
  for (const auto& [k, v] : r.ric) ric[std::to_string(k)] = num(v);
  j["ric"] = ric;
  Json nsp = Json::object();
  for (const auto& [k, v] : r.nsp) nsp[std::to_string(k)] = num(v);
  j["nsp"] = nsp;
  j["frame_bounds"] = {{"a", num(r.bounds.lower)}, {"b", num(r.bounds.upper)}};
  j["flags"] = {{"unit_norm", r.unit_norm},
                {"tight", r.bounds.tight},
                {"parseval", r.bounds.parseval},
                {"etf", r.bounds.etf},
                {"rank_deficient", r.bounds.rank_deficient}};
  j["skipped"] = r.skipped;
  return j;
}

Json to_json(const RecoveryResult& r) {
  Json j;
  Json values = Json::array();
  for (Index i = 0; i < r.code.size(); ++i) values.push_back(r.code[i]);
  j["code"] = values;
  j["support"] = r.code.support();
  j["sparsity"] = r.code.sparsity();
  j["residual_norm"] = num(r.residual_norm);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  Json trace = Json::array();
  for (double v : r.objective_trace) trace.push_back(num(v));
  j["objective_trace"] = trace;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const SynthDictConfig& cfg, const SynthReport& report) {
  Json rows = Json::array();
  for (const auto& s : report.summaries) {
    rows.push_back({{"noise_snr_db", noise_label(cfg.noise_snr_db[s.noise_index])},
                    {"algorithm", std::string(to_string(s.algorithm))},
                    {"mean_final_e_snr", num(s.mean_final_e_snr)},
                    {"mean_atoms_recovered", num(s.mean_atoms)},
                    {"sd_atoms_recovered", num(s.sd_atoms)},
                    {"trials", s.trials},
                    {"monotone_violations", s.monotone_violations}});
  }
  return {{"atoms", cfg.m}, {"summaries", rows}};
}

Json volumes_json(const std::vector<PhaseCell>& cells, const std::vector<std::string>& solvers) {
  const auto raw = raw_volumes(cells, solvers);
  const auto scores = volume_scores(cells, solvers);
  Json j;
  Json norm = Json::object();
  Json sums = Json::object();
  for (const auto& name : solvers) {
    norm[name] = num(scores.at(name));
    sums[name] = num(raw.at(name));
  }
  j["normalized"] = norm;
  j["raw"] = sums;
  j["cells"] = cells.size();
  return j;
}

Json manifest(const RunConfig& cfg) {
  Json j;
  j["tool"] = "sparsekit";
  j["version"] = SPARSEKIT_VERSION;
  if (cfg.command == "phase") j["seed"] = cfg.phase.seed;
  if (cfg.command == "dictlearn") j["seed"] = cfg.dictlearn.seed;
  j["config"] = cfg.resolved();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sparsekit::cli
