#include <algorithm>
#include <cmath>

#include "sparsekit/convex.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/experiments.hpp"
#include "sparsekit/frame_analysis.hpp"
#include "sparsekit/greedy.hpp"
#include "sparsekit/relax.hpp"

namespace sparsekit {
namespace {

double get(const SolverParams& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int get_int(const SolverParams& p, const char* key, int fallback) {
  const double v = get(p, key, fallback);
  if (v != std::floor(v)) throw InvalidArgument(std::string("solver parameter '") + key + "' must be an integer");
  return static_cast<int>(v);
}

StopRule greedy_stop(const Frame& phi, const SolverParams& p) {
  StopRule stop = StopRule::noiseless(phi.rows());
  if (p.count("k")) stop.max_sparsity = get_int(p, "k", 0);
  if (p.count("tol")) stop.residual_tol = get(p, "tol", 0.0);
  stop.max_iterations = get_int(p, "max_iterations", stop.max_iterations);
  return stop;
}

std::vector<SolverEntry> build_registry() {
  std::vector<SolverEntry> r;
  const std::vector<std::string> greedy_params{"k", "tol", "max_iterations"};
  r.push_back({"mp", "matching pursuit", greedy_params,
               [](const Frame& phi, const Signal& s, const SolverParams& p) { return mp(phi, s, greedy_stop(phi, p)); }});
  r.push_back({"omp", "orthogonal matching pursuit", greedy_params,
               [](const Frame& phi, const Signal& s, const SolverParams& p) { return omp(phi, s, greedy_stop(phi, p)); }});
  r.push_back({"ls_omp", "least-squares OMP", greedy_params, [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 return ls_omp(phi, s, greedy_stop(phi, p));
               }});
  r.push_back({"sl0", "smoothed l0", {"mu", "inner_steps", "sigma_decay", "sigma_min", "threshold"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 Sl0Config c;
                 c.step_mu = get(p, "mu", c.step_mu);
                 c.inner_steps = get_int(p, "inner_steps", c.inner_steps);
                 c.sigma_decay = get(p, "sigma_decay", c.sigma_decay);
                 c.sigma_min = get(p, "sigma_min", c.sigma_min);
                 c.threshold = get(p, "threshold", c.threshold);
                 return sl0(phi, s, c);
               }});
  r.push_back({"limaps", "LiMapS shrinkage and projection", {"growth", "max_iterations", "tol", "threshold"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 LimapsConfig c;
                 c.lambda_growth = get(p, "growth", c.lambda_growth);
                 c.max_iterations = get_int(p, "max_iterations", c.max_iterations);
                 c.convergence_tol = get(p, "tol", c.convergence_tol);
                 c.threshold = get(p, "threshold", c.threshold);
                 return limaps(phi, s, c);
               }});
  r.push_back({"focuss", "FOCUSS reweighted least squares", {"q", "max_iterations", "tol", "threshold"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 FocussConfig c;
                 c.q = get(p, "q", c.q);
                 c.max_iterations = get_int(p, "max_iterations", c.max_iterations);
                 c.fixed_point_tol = get(p, "tol", c.fixed_point_tol);
                 c.threshold = get(p, "threshold", c.threshold);
                 return focuss(phi, s, c);
               }});
  r.push_back({"bp", "basis pursuit, compact 2m-variable LP", {}, [](const Frame& phi, const Signal& s, const SolverParams&) {
                 BpOptions o;
                 o.layout = BpLayout::Compact;
                 return basis_pursuit(phi, s, o);
               }});
  r.push_back({"bp_split", "basis pursuit, 6m-variable split LP", {},
               [](const Frame& phi, const Signal& s, const SolverParams&) {
                 BpOptions o;
                 o.layout = BpLayout::Split;
                 return basis_pursuit(phi, s, o);
               }});
  r.push_back({"lasso", "Lasso by coordinate descent; without lambda, continuation to ratio * lambda_max",
               {"lambda", "ratio", "steps", "kkt_tol", "max_sweeps"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 LassoConfig c;
                 c.kkt_tol = get(p, "kkt_tol", c.kkt_tol);
                 c.max_sweeps = get_int(p, "max_sweeps", 20'000);
                 c.active_set = true;
                 if (p.count("lambda")) {
                   c.lambda = get(p, "lambda", 0.0);
                   return bpdn_lasso(phi, s, c);
                 }
                 return lasso_continuation(phi, s, get(p, "ratio", 1e-6), get_int(p, "steps", 25), c);
               }});
  r.push_back({"elastic_net", "elastic net by coordinate descent", {"lambda", "mix", "kkt_tol", "max_sweeps"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 LassoConfig c;
                 c.mix = get(p, "mix", 0.5);
                 c.lambda = get(p, "lambda", 1e-3 * lasso_lambda_max(phi, s));
                 c.kkt_tol = get(p, "kkt_tol", c.kkt_tol);
                 c.max_sweeps = get_int(p, "max_sweeps", c.max_sweeps);
                 return elastic_net(phi, s, c);
               }});
  r.push_back({"exhaustive", "exhaustive l0 search over supports of size <= k", {"k"},
               [](const Frame& phi, const Signal& s, const SolverParams& p) {
                 return exhaustive_p0(phi, s, get_int(p, "k", 2));
               }});
  return r;
}

}  // namespace

const std::vector<SolverEntry>& solver_registry() {
  static const std::vector<SolverEntry> registry = build_registry();
  return registry;
}

std::vector<std::string> solver_names() {
  std::vector<std::string> out;
  for (const auto& e : solver_registry()) out.push_back(e.name);
  return out;
}

const SolverEntry& find_solver(const std::string& name) {
  for (const auto& e : solver_registry()) {
    if (e.name == name) return e;
  }
  std::string valid;
  for (const auto& n : solver_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown solver '" + name + "' (valid: " + valid + ")");
}

void check_solver_params(const SolverEntry& solver, const SolverParams& params) {
  for (const auto& [key, value] : params) {
    if (std::find(solver.params.begin(), solver.params.end(), key) == solver.params.end()) {
      std::string valid;
      for (const auto& n : solver.params) valid += (valid.empty() ? "" : ", ") + n;
      throw InvalidArgument("solver '" + solver.name + "' has no parameter '" + key + "'" +
                            (valid.empty() ? std::string(" (it takes none)") : " (valid: " + valid + ")"));
    }
    if (!std::isfinite(value)) throw InvalidArgument("solver parameter '" + key + "' must be finite");
  }
}

}  // namespace sparsekit
