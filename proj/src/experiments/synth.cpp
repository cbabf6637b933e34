#include <cmath>
#include <numeric>
#include <sstream>

#include "sparsekit/errors.hpp"
#include "sparsekit/experiments.hpp"
#include "sparsekit/matrix_io.hpp"

namespace sparsekit {

void SynthDictConfig::validate() const {
  if (n < 2 || m <= n) throw InvalidArgument("dictlearn: need 2 <= n < m");
  if (k < 1 || k >= n) throw InvalidArgument("dictlearn: need 1 <= k < n");
  if (examples < m) throw InvalidArgument("dictlearn: need at least m examples");
  if (iterations < 0) throw InvalidArgument("dictlearn: iterations must be >= 0");
  if (trials < 1) throw InvalidArgument("dictlearn: trials must be >= 1");
  if (noise_snr_db.empty()) throw InvalidArgument("dictlearn: noise list is empty");
  for (const auto& s : noise_snr_db) {
    if (s && !std::isfinite(*s)) throw InvalidArgument("dictlearn: noise SNR must be finite");
  }
  if (algorithms.empty()) throw InvalidArgument("dictlearn: algorithm list is empty");
  if (group_size < 1) throw InvalidArgument("dictlearn: group_size must be >= 1");
  if (coder != "omp" && coder != "exhaustive") {
    throw InvalidArgument("dictlearn: unknown coder '" + coder + "' (valid: omp, exhaustive)");
  }
  if (jobs < 1) throw InvalidArgument("dictlearn: jobs must be >= 1");
}

SynthInstance synth_instance(const SynthDictConfig& cfg, std::size_t noise_index, int trial) {
  // D and X depend on the trial only, so every noise level perturbs the same data.
  const RngStream base(cfg.seed, {static_cast<std::uint64_t>(trial)});
  SynthInstance inst;
  inst.d_true = gaussian_frame(cfg.n, cfg.m, base.fork(0), true);

  Engine eng = base.fork(1).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  inst.x_true = Matrix::Zero(cfg.m, cfg.examples);
  std::vector<Index> idx(static_cast<std::size_t>(cfg.m));
  for (Index l = 0; l < cfg.examples; ++l) {
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < cfg.k; ++i) {
      std::uniform_int_distribution<Index> pick(i, cfg.m - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(eng))]);
      double w = 0.0;
      while (w == 0.0) w = normal(eng);
      inst.x_true(idx[static_cast<std::size_t>(i)], l) = w;
    }
  }
  inst.y = inst.d_true * inst.x_true;

  const auto& snr = cfg.noise_snr_db.at(noise_index);
  if (snr) {
    const Frame noise =
        gaussian_frame(cfg.n, cfg.examples, RngStream(cfg.seed, {static_cast<std::uint64_t>(trial), 2, noise_index}),
                       false);
    // ||DX||_F / ||N||_F = 10^(snr/20)
    const double scale = inst.y.norm() / (noise.norm() * std::pow(10.0, *snr / 20.0));
    inst.y += scale * noise;
  }
  return inst;
}

SynthReport synth_dict_experiment(const SynthDictConfig& cfg) {
  cfg.validate();
  const std::size_t levels = cfg.noise_snr_db.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t algs = cfg.algorithms.size();
  SynthReport report;
  report.runs.resize(levels * trials * algs);

  parallel_for(levels * trials, cfg.jobs, [&](std::size_t task) {
    const std::size_t noise = task / trials;
    const int trial = static_cast<int>(task % trials);
    const SynthInstance inst = synth_instance(cfg, noise, trial);
    for (std::size_t a = 0; a < algs; ++a) {
      LearnConfig lc;
      lc.atoms = cfg.m;
      lc.sparsity = cfg.k;
      lc.iterations = cfg.iterations;
      lc.algorithm = cfg.algorithms[a];
      lc.group_size = cfg.group_size;
      lc.coder = cfg.coder == "exhaustive" ? exhaustive_coder() : omp_coder();
      // Same starting dictionary for every algorithm.
      lc.rng = RngStream(cfg.seed, {static_cast<std::uint64_t>(trial), 3, noise});
      const LearnTrace tr = learn(inst.y, lc);

      SynthRun& run = report.runs[task * algs + a];
      run.noise_index = noise;
      run.trial = trial;
      run.algorithm = cfg.algorithms[a];
      run.e_snr = tr.e_snr;
      run.atoms_recovered = atom_recovery_count(inst.d_true, tr.dictionary);
      run.coding_failures = tr.coding_failures;
      for (const auto& u : tr.updates) {
        if (u.after > u.before + kMonotoneTol * std::max(1.0, u.before)) ++run.monotone_violations;
      }
    }
  });

  for (std::size_t noise = 0; noise < levels; ++noise) {
    for (std::size_t a = 0; a < algs; ++a) {
      SynthSummary s;
      s.noise_index = noise;
      s.algorithm = cfg.algorithms[a];
      s.trials = cfg.trials;
      s.mean_curve.assign(static_cast<std::size_t>(cfg.iterations) + 1, 0.0);
      std::vector<double> atoms;
      for (std::size_t t = 0; t < trials; ++t) {
        const SynthRun& run = report.runs[(noise * trials + t) * algs + a];
        for (std::size_t i = 0; i < s.mean_curve.size(); ++i) s.mean_curve[i] += run.e_snr[i];
        atoms.push_back(static_cast<double>(run.atoms_recovered));
        s.monotone_violations += run.monotone_violations;
      }
      for (double& v : s.mean_curve) v /= static_cast<double>(trials);
      s.mean_final_e_snr = s.mean_curve.back();
      s.mean_atoms = std::accumulate(atoms.begin(), atoms.end(), 0.0) / static_cast<double>(trials);
      if (trials > 1) {
        double ss = 0.0;
        for (double v : atoms) ss += (v - s.mean_atoms) * (v - s.mean_atoms);
        s.sd_atoms = std::sqrt(ss / static_cast<double>(trials - 1));
      }
      report.summaries.push_back(std::move(s));
    }
  }
  return report;
}

std::string noise_label(const std::optional<double>& snr_db) {
  return snr_db ? format_double(*snr_db) : std::string("none");
}

std::string learn_curves_csv(const SynthDictConfig& cfg, const SynthReport& report) {
  std::ostringstream out;
  out << "noise_snr_db,algorithm,iteration,mean_e_snr\n";
  for (const auto& s : report.summaries) {
    for (std::size_t i = 0; i < s.mean_curve.size(); ++i) {
      out << noise_label(cfg.noise_snr_db[s.noise_index]) << ',' << to_string(s.algorithm) << ',' << i << ','
          << format_double(s.mean_curve[i]) << '\n';
    }
  }
  return out.str();
}

std::string atoms_table_csv(const SynthDictConfig& cfg, const SynthReport& report) {
  std::ostringstream out;
  out << "noise_snr_db,algorithm,mean_atoms,sd_atoms,mean_final_e_snr,trials,monotone_violations\n";
  for (const auto& s : report.summaries) {
    out << noise_label(cfg.noise_snr_db[s.noise_index]) << ',' << to_string(s.algorithm) << ','
        << format_double(s.mean_atoms) << ',' << format_double(s.sd_atoms) << ',' << format_double(s.mean_final_e_snr)
        << ',' << s.trials << ',' << s.monotone_violations << '\n';
  }
  return out.str();
}

}  // namespace sparsekit
