#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sparsekit/errors.hpp"
#include "sparsekit/experiments.hpp"
#include "sparsekit/matrix_io.hpp"

namespace sparsekit {

double recovery_snr(const Vector& alpha_star, const Vector& alpha_hat) {
  if (alpha_star.size() != alpha_hat.size()) throw InvalidArgument("recovery_snr: length mismatch");
  const double num = alpha_hat.norm();
  const double den = (alpha_hat - alpha_star).norm();
  if (den == 0.0) return kSnrSentinel;
  if (num == 0.0) return -kSnrSentinel;
  return std::clamp(20.0 * std::log10(num / den), -kSnrSentinel, kSnrSentinel);
}

PhaseConfig PhaseConfig::full_scale() {
  PhaseConfig c;
  c.n = 100;
  c.trials = 100;
  return c;
}

void PhaseConfig::validate() const {
  if (n < 2) throw InvalidArgument("phase: n must be >= 2");
  if (resolution < 1) throw InvalidArgument("phase: resolution must be >= 1");
  if (trials < 1) throw InvalidArgument("phase: trials must be >= 1");
  if (!(delta_min > 0.0 && delta_min <= delta_max && delta_max < 1.0)) {
    throw InvalidArgument("phase: need 0 < delta_min <= delta_max < 1");
  }
  if (!(rho_min > 0.0 && rho_min <= rho_max && rho_max <= 0.5)) {
    throw InvalidArgument("phase: need 0 < rho_min <= rho_max <= 0.5");
  }
  if (solvers.empty()) throw InvalidArgument("phase: solver list is empty");
  for (const auto& s : solvers) find_solver(s);
  if (jobs < 1) throw InvalidArgument("phase: jobs must be >= 1");
}

namespace {

double lin(double lo, double hi, int i, int count) {
  return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

std::vector<PhaseCell> phase_layout(const PhaseConfig& cfg) {
  cfg.validate();
  std::vector<PhaseCell> cells;
  for (int i = 0; i < cfg.resolution; ++i) {
    const double delta = lin(cfg.delta_min, cfg.delta_max, i, cfg.resolution);
    const Index m = std::max<Index>(cfg.n + 1, std::lround(static_cast<double>(cfg.n) / delta));
    for (int j = 0; j < cfg.resolution; ++j) {
      const double rho = lin(cfg.rho_min, cfg.rho_max, j, cfg.resolution);
      const Index k = std::clamp<Index>(std::lround(rho * static_cast<double>(cfg.n)), 1, cfg.n / 2);
      PhaseCell c;
      c.index = cells.size();
      c.n = cfg.n;
      c.m = m;
      c.k = k;
      c.delta = static_cast<double>(cfg.n) / static_cast<double>(m);
      c.rho = static_cast<double>(k) / static_cast<double>(cfg.n);
      cells.push_back(c);
    }
  }
  return cells;
}

PhaseTrial phase_instance(const PhaseConfig& cfg, const PhaseCell& cell, int trial) {
  const RngStream rng(cfg.seed, {cell.index, static_cast<std::uint64_t>(trial)});
  PhaseTrial t;
  t.phi = gaussian_frame(cell.n, cell.m, rng.fork(0), true);
  t.alpha = k_sparse_gaussian(cell.m, cell.k, rng.fork(1)).values();
  t.s = t.phi * t.alpha;
  return t;
}

std::vector<PhaseCell> phase_grid(const PhaseConfig& cfg) {
  std::vector<PhaseCell> cells = phase_layout(cfg);
  const std::size_t per_cell = static_cast<std::size_t>(cfg.trials);
  const std::size_t solvers = cfg.solvers.size();
  // snr[(cell * trials + trial) * solvers + solver]; NaN marks a failure.
  std::vector<double> snr(cells.size() * per_cell * solvers, 0.0);
  std::vector<const SolverEntry*> entries;
  for (const auto& name : cfg.solvers) entries.push_back(&find_solver(name));

  parallel_for(cells.size() * per_cell, cfg.jobs, [&](std::size_t task) {
    const PhaseCell& cell = cells[task / per_cell];
    const PhaseTrial inst = phase_instance(cfg, cell, static_cast<int>(task % per_cell));
    for (std::size_t s = 0; s < solvers; ++s) {
      double v;
      try {
        v = recovery_snr(inst.alpha, entries[s]->run(inst.phi, inst.s, {}).code.values());
      } catch (const Error&) {
        v = std::nan("");
      }
      snr[task * solvers + s] = v;
    }
  });

  // Fixed trial order keeps the sums bit-identical for any job count.
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].trials = cfg.trials;
    for (std::size_t s = 0; s < solvers; ++s) {
      double sum = 0.0;
      int failed = 0;
      for (std::size_t t = 0; t < per_cell; ++t) {
        const double v = snr[(c * per_cell + t) * solvers + s];
        if (std::isnan(v)) {
          ++failed;
          sum += -kSnrSentinel;
        } else {
          sum += v;
        }
      }
      cells[c].mean_snr[cfg.solvers[s]] = sum / static_cast<double>(per_cell);
      cells[c].failures[cfg.solvers[s]] = failed;
    }
  }
  return cells;
}

std::map<std::string, double> raw_volumes(const std::vector<PhaseCell>& cells,
                                          const std::vector<std::string>& solvers) {
  if (cells.empty()) throw InvalidArgument("volume: no cells");
  std::map<std::string, double> v;
  for (const auto& name : solvers) {
    double sum = 0.0;
    for (const auto& c : cells) {
      const auto it = c.mean_snr.find(name);
      if (it == c.mean_snr.end()) {
        throw InvalidArgument("volume: cell " + std::to_string(c.index) + " has no result for solver '" + name + "'");
      }
      sum += it->second;
    }
    v[name] = sum;
  }
  return v;
}

std::map<std::string, double> volume_scores(const std::vector<PhaseCell>& cells,
                                            const std::vector<std::string>& solvers) {
  const auto raw = raw_volumes(cells, solvers);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : raw) best = std::max(best, v);
  std::map<std::string, double> out;
  for (const auto& [name, v] : raw) {
    if (v == best) {
      out[name] = 1.0;
    } else if (best > 0.0) {
      out[name] = v / best;
    } else {
      out[name] = best / v;
    }
  }
  return out;
}

std::string cells_csv(const std::vector<PhaseCell>& cells, const std::vector<std::string>& solvers) {
  std::ostringstream out;
  out << "delta,rho,n,m,k,solver,mean_snr,trials,failures\n";
  for (const auto& c : cells) {
    for (const auto& name : solvers) {
      out << format_double(c.delta) << ',' << format_double(c.rho) << ',' << c.n << ',' << c.m << ',' << c.k << ','
          << name << ',' << format_double(c.mean_snr.at(name)) << ',' << c.trials << ',' << c.failures.at(name)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace sparsekit
