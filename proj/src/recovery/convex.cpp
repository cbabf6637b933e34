#include <algorithm>
#include <cmath>

#include "sparsekit/convex.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/kernels.hpp"

namespace sparsekit {

Vector BpProgram::extract(const Vector& x) const {
  return x.segment(plus_offset(), atoms) - x.segment(minus_offset(), atoms);
}

BpProgram bp_formulate(const Frame& phi, const Signal& s, BpLayout layout) {
  if (phi.size() == 0) throw InvalidArgument("bp_formulate: empty frame");
  if (s.size() != phi.rows()) throw InvalidArgument("bp_formulate: signal length != frame rows");
  const Index n = phi.rows();
  const Index m = phi.cols();
  BpProgram prog;
  prog.layout = layout;
  prog.atoms = m;
  StandardFormLp& lp = prog.lp;
  lp.rhs = Vector::Zero(layout == BpLayout::Split ? 2 * m + n : n);

  if (layout == BpLayout::Compact) {
    lp.cost = Vector::Ones(2 * m);
    lp.constraints.resize(n, 2 * m);
    lp.constraints << phi, -phi;
    lp.rhs = s;
    return prog;
  }

  // Blocks of width m: 0 alpha+, 1 t+, 2 alpha-, 3 t-, 4 slack1, 5 slack2.
  //   alpha - t + slack1 = 0,  -alpha - t + slack2 = 0,  Phi alpha = s.
  const Matrix id = Matrix::Identity(m, m);
  lp.cost = Vector::Zero(6 * m);
  lp.cost.segment(m, m).setOnes();
  lp.cost.segment(3 * m, m).setConstant(-1.0);
  lp.constraints = Matrix::Zero(2 * m + n, 6 * m);
  Matrix a(2 * m, 2 * m);
  a << id, -id, -id, -id;
  lp.constraints.block(0, 0, 2 * m, 2 * m) = a;
  lp.constraints.block(0, 2 * m, 2 * m, 2 * m) = -a;
  lp.constraints.block(0, 4 * m, 2 * m, 2 * m) = Matrix::Identity(2 * m, 2 * m);
  lp.constraints.block(2 * m, 0, n, m) = phi;
  lp.constraints.block(2 * m, 2 * m, n, m) = -phi;
  lp.rhs.tail(n) = s;
  return prog;
}

RecoveryResult basis_pursuit(const Frame& phi, const Signal& s, const BpOptions& options) {
  if (!phi.allFinite() || !s.allFinite()) throw InvalidArgument("basis_pursuit: non-finite input");
  const BpProgram prog = bp_formulate(phi, s, options.layout);
  const LpSolution sol = lp_solve(prog.lp, options.lp);
  if (sol.status == LpStatus::Infeasible) throw NumericalError("basis_pursuit: signal is not in the range of the frame");
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("basis_pursuit: LP " + std::string(to_string(sol.status)));
  }
  RecoveryResult out;
  out.code = SparseCode::thresholded(prog.extract(sol.x), options.threshold);
  out.residual_norm = residual_norm(phi, out.code.values(), s);
  out.iterations = static_cast<int>(sol.pivots);
  out.converged = true;
  out.objective_trace = {sol.objective};
  if (options.layout == BpLayout::Compact && sol.alternate_optima) out.warnings.emplace_back("alternate_optima");
  return out;
}

void LassoConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lasso: lambda must be finite and >= 0");
  if (!(mix >= 0.0 && mix <= 1.0)) throw InvalidArgument("lasso: mix must lie in [0, 1]");
  if (max_sweeps < 1) throw InvalidArgument("lasso: max_sweeps must be >= 1");
  if (!(kkt_tol > 0.0)) throw InvalidArgument("lasso: kkt_tol must be positive");
}

double lasso_objective(const Frame& phi, const Signal& s, const Vector& alpha, const LassoConfig& cfg) {
  const double fit = (phi * alpha - s).squaredNorm();
  return fit + cfg.lambda * (0.5 * (1.0 - cfg.mix) * alpha.squaredNorm() + cfg.mix * alpha.lpNorm<1>());
}

namespace {

// g_j = 2 phi_j^T (Phi a - s) + lambda (1 - mix) a_j, given r = s - Phi a.
double kkt_from_residual(const Frame& phi, const Vector& r, const Vector& alpha, const LassoConfig& cfg) {
  Vector grad(phi.cols());
  kernels::gemv_t({phi.data(), static_cast<std::size_t>(phi.size())}, static_cast<std::size_t>(phi.rows()),
                  as_span(r), as_span(grad));
  const double l1 = cfg.lambda * cfg.mix;
  const double l2 = cfg.lambda * (1.0 - cfg.mix);
  double worst = 0.0;
  for (Index j = 0; j < alpha.size(); ++j) {
    const double g = -2.0 * grad[j] + l2 * alpha[j];
    const double v = alpha[j] != 0.0 ? std::abs(g + l1 * (alpha[j] > 0 ? 1.0 : -1.0))
                                     : std::max(0.0, std::abs(g) - l1);
    worst = std::max(worst, v);
  }
  return worst;
}

double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

RecoveryResult coordinate_descent(const Frame& phi, const Signal& s, const LassoConfig& cfg, const char* who) {
  cfg.validate();
  if (phi.size() == 0) throw InvalidArgument(std::string(who) + ": empty frame");
  if (s.size() != phi.rows()) throw InvalidArgument(std::string(who) + ": signal length != frame rows");
  if (!phi.allFinite() || !s.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite input");
  const Index m = phi.cols();
  Vector alpha = Vector::Zero(m);
  if (cfg.warm_start) {
    if (cfg.warm_start->size() != m) throw InvalidArgument(std::string(who) + ": warm start has wrong length");
    alpha = *cfg.warm_start;
  }
  const Vector col_sq = phi.colwise().squaredNorm().transpose();
  const double half_l1 = 0.5 * cfg.lambda * cfg.mix;
  const double half_l2 = 0.5 * cfg.lambda * (1.0 - cfg.mix);

  Vector r = s - phi * alpha;
  std::vector<double> trace{lasso_objective(phi, s, alpha, cfg)};
  bool converged = kkt_from_residual(phi, r, alpha, cfg) <= cfg.kkt_tol;
  int sweeps = 0;
  auto update = [&](Index j) {
    const double denom = col_sq[j] + half_l2;
    if (denom == 0.0) return 0.0;  // zero atom with no ridge term
    const auto col = column_span(phi, j);
    const double rho = kernels::dot(col, as_span(r)) + col_sq[j] * alpha[j];
    const double next = soft(rho, half_l1) / denom;
    const double delta = next - alpha[j];
    if (delta != 0.0) {
      kernels::axpy(-delta, col, as_span(r));
      alpha[j] = next;
    }
    return std::abs(delta) * std::sqrt(col_sq[j]);
  };

  std::vector<Index> active;
  while (!converged && sweeps < cfg.max_sweeps) {
    for (Index j = 0; j < m; ++j) update(j);
    ++sweeps;
    r = s - phi * alpha;  // drop accumulated rounding before the KKT check
    trace.push_back(lasso_objective(phi, s, alpha, cfg));
    converged = kkt_from_residual(phi, r, alpha, cfg) <= cfg.kkt_tol;
    if (converged || !cfg.active_set) continue;

    active.clear();
    for (Index j = 0; j < m; ++j) {
      if (alpha[j] != 0.0) active.push_back(j);
    }
    for (int pass = 0; pass < 1000; ++pass) {
      double moved = 0.0;
      for (Index j : active) moved = std::max(moved, update(j));
      if (moved <= 1e-3 * cfg.kkt_tol) break;
    }
  }

  RecoveryResult out;
  out.code = SparseCode(alpha);
  out.residual_norm = residual_norm(phi, alpha, s);
  out.iterations = sweeps;
  out.converged = converged;
  out.objective_trace = std::move(trace);
  return out;
}

}  // namespace

double kkt_residual(const Frame& phi, const Signal& s, const Vector& alpha, const LassoConfig& cfg) {
  return kkt_from_residual(phi, s - phi * alpha, alpha, cfg);
}

double lasso_lambda_max(const Frame& phi, const Signal& s) {
  return 2.0 * (phi.transpose() * s).cwiseAbs().maxCoeff();
}

RecoveryResult bpdn_lasso(const Frame& phi, const Signal& s, const LassoConfig& cfg) {
  if (cfg.mix != 1.0) throw InvalidArgument("bpdn_lasso: mix must be 1; use elastic_net");
  return coordinate_descent(phi, s, cfg, "bpdn_lasso");
}

RecoveryResult elastic_net(const Frame& phi, const Signal& s, const LassoConfig& cfg) {
  return coordinate_descent(phi, s, cfg, "elastic_net");
}

std::vector<RecoveryResult> lasso_path(const Frame& phi, const Signal& s, const std::vector<double>& lambdas,
                                       const LassoConfig& base) {
  std::vector<RecoveryResult> out;
  out.reserve(lambdas.size());
  LassoConfig cfg = base;
  for (double lambda : lambdas) {
    cfg.lambda = lambda;
    out.push_back(coordinate_descent(phi, s, cfg, "lasso_path"));
    cfg.warm_start = out.back().code.values();
  }
  return out;
}

RecoveryResult lasso_continuation(const Frame& phi, const Signal& s, double ratio, int steps,
                                  const LassoConfig& base) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("lasso_continuation: ratio must lie in (0, 1)");
  if (steps < 1) throw InvalidArgument("lasso_continuation: steps must be >= 1");
  const double top = lasso_lambda_max(phi, s);
  if (top == 0.0) {
    LassoConfig cfg = base;
    cfg.lambda = 0.0;
    return coordinate_descent(phi, s, cfg, "lasso_continuation");
  }
  std::vector<double> lambdas;
  for (int i = 1; i <= steps; ++i) lambdas.push_back(top * std::pow(ratio, static_cast<double>(i) / steps));
  auto path = lasso_path(phi, s, lambdas, base);
  RecoveryResult last = std::move(path.back());
  for (const auto& r : path) {
    if (!r.converged) {
      last.warnings.emplace_back("path_step_not_converged");
      break;
    }
  }
  return last;
}

}  // namespace sparsekit
