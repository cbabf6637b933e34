#pragma once
// Reproduction protocols: delta-rho phase-transition grids scored by volume,
// and the synthetic dictionary-recovery study.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsekit/core.hpp"
#include "sparsekit/dictionary.hpp"
#include "sparsekit/result.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit {

// ---- solver registry -------------------------------------------------------

using SolverParams = std::map<std::string, double>;

struct SolverEntry {
  std::string name;
  std::string summary;
  std::vector<std::string> params;  // accepted parameter names
  std::function<RecoveryResult(const Frame&, const Signal&, const SolverParams&)> run;
};

const std::vector<SolverEntry>& solver_registry();
std::vector<std::string> solver_names();

/// Throws InvalidArgument listing the valid names.
const SolverEntry& find_solver(const std::string& name);

/// Rejects parameters the solver does not know.
void check_solver_params(const SolverEntry& solver, const SolverParams& params);

// ---- metrics ---------------------------------------------------------------

constexpr double kSnrSentinel = 300.0;

/// 20 log10(||alpha_hat|| / ||alpha_hat - alpha_star||), clamped to +-300 dB.
double recovery_snr(const Vector& alpha_star, const Vector& alpha_hat);

// ---- phase transition ------------------------------------------------------

struct PhaseConfig {
  Index n = 50;
  int resolution = 10;  // cells per axis
  double delta_min = 0.1;
  double delta_max = 0.99;
  double rho_min = 0.05;
  double rho_max = 0.5;
  int trials = 20;
  std::vector<std::string> solvers{"omp", "sl0", "limaps", "bp", "lasso"};
  std::uint64_t seed = 1;
  int jobs = 1;

  /// n = 100, 100 trials.
  static PhaseConfig full_scale();
  void validate() const;
};

struct PhaseCell {
  std::size_t index = 0;
  double delta = 0.0;  // n / m actually used
  double rho = 0.0;    // k / n actually used
  Index n = 0;
  Index m = 0;
  Index k = 0;
  int trials = 0;
  std::map<std::string, double> mean_snr;
  std::map<std::string, int> failures;
};

/// Grid geometry without running anything, row-major over (delta, rho).
std::vector<PhaseCell> phase_layout(const PhaseConfig& cfg);

struct PhaseTrial {
  Frame phi;
  Vector alpha;
  Signal s;
};

/// The instance for (cell, trial); every solver sees the same one.
PhaseTrial phase_instance(const PhaseConfig& cfg, const PhaseCell& cell, int trial);

std::vector<PhaseCell> phase_grid(const PhaseConfig& cfg);

/// Sum of cell SNRs per solver divided by the best sum, so the best scores 1.
/// When every sum is <= 0 the scores are best / V instead, which keeps the
/// best at 1 and the ordering intact.
std::map<std::string, double> volume_scores(const std::vector<PhaseCell>& cells,
                                            const std::vector<std::string>& solvers);
std::map<std::string, double> raw_volumes(const std::vector<PhaseCell>& cells,
                                          const std::vector<std::string>& solvers);

std::string cells_csv(const std::vector<PhaseCell>& cells, const std::vector<std::string>& solvers);

/// Self-contained heatmap; colour is linear in SNR between -300 and +300 dB.
std::string phase_heatmap_svg(const std::vector<PhaseCell>& cells, const PhaseConfig& cfg,
                              const std::string& solver);

// ---- synthetic dictionary learning ----------------------------------------

struct SynthDictConfig {
  Index n = 50;
  Index m = 100;
  Index k = 5;
  Index examples = 2000;  // L
  int iterations = 50;    // T
  std::vector<std::optional<double>> noise_snr_db{std::nullopt};  // nullopt: no noise
  int trials = 10;
  std::vector<DictAlgorithm> algorithms{DictAlgorithm::Ksvd, DictAlgorithm::Rsvd};
  Index group_size = 5;
  std::string coder = "omp";  // omp | exhaustive
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
};

struct SynthInstance {
  Frame d_true;
  Matrix x_true;
  Matrix y;
};

SynthInstance synth_instance(const SynthDictConfig& cfg, std::size_t noise_index, int trial);

struct SynthRun {
  std::size_t noise_index = 0;
  int trial = 0;
  DictAlgorithm algorithm = DictAlgorithm::Ksvd;
  std::vector<double> e_snr;
  Index atoms_recovered = 0;
  int monotone_violations = 0;  // update steps that increased ||Y - DX||_F
  std::size_t coding_failures = 0;
};

struct SynthSummary {
  std::size_t noise_index = 0;
  DictAlgorithm algorithm = DictAlgorithm::Ksvd;
  std::vector<double> mean_curve;
  double mean_final_e_snr = 0.0;
  double mean_atoms = 0.0;
  double sd_atoms = 0.0;
  int trials = 0;
  int monotone_violations = 0;
};

struct SynthReport {
  std::vector<SynthRun> runs;          // ordered by (noise, trial, algorithm)
  std::vector<SynthSummary> summaries; // ordered by (noise, algorithm)
};

/// Relative slack allowed in the per-update monotonicity audit.
constexpr double kMonotoneTol = 1e-10;

SynthReport synth_dict_experiment(const SynthDictConfig& cfg);

std::string noise_label(const std::optional<double>& snr_db);
std::string learn_curves_csv(const SynthDictConfig& cfg, const SynthReport& report);
std::string atoms_table_csv(const SynthDictConfig& cfg, const SynthReport& report);

// ---- task pool -------------------------------------------------------------

/// Runs fn(0..count-1) on up to `jobs` threads. The first exception thrown by
/// any task is rethrown after all workers stop.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace sparsekit
