#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsekit/errors.hpp"
#include "sparsekit/greedy.hpp"
#include "sparsekit/kernels.hpp"

namespace sparsekit {

StopRule StopRule::noiseless(Index n) {
  StopRule r;
  r.max_sparsity = n;
  r.residual_tol = 1e-10;
  return r;
}

StopRule StopRule::sparsity(Index k) {
  StopRule r;
  r.max_sparsity = k;
  r.residual_tol = 1e-10;
  return r;
}

void StopRule::validate() const {
  if (max_iterations < 0) throw InvalidArgument("stop rule: max_iterations must be non-negative");
  if (max_sparsity && *max_sparsity < 0) throw InvalidArgument("stop rule: max_sparsity must be non-negative");
  if (residual_tol && !(*residual_tol >= 0.0)) throw InvalidArgument("stop rule: residual_tol must be >= 0");
  // a zero cap with nothing else set counts as no stopping condition at all
  if (max_iterations == 0 && !max_sparsity && !residual_tol) throw InvalidArgument("stop rule: no stopping condition");
}

namespace {

void check_inputs(const Frame& phi, const Signal& s, const StopRule& stop, const char* who) {
  stop.validate();
  if (phi.size() == 0) throw InvalidArgument(std::string(who) + ": empty frame");
  if (s.size() != phi.rows()) throw InvalidArgument(std::string(who) + ": signal length != frame rows");
  if (!phi.allFinite() || !s.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite input");
  if (!has_unit_columns(phi, 1e-10)) throw InvalidArgument(std::string(who) + ": atoms must have unit l2 norm");
}

bool residual_small(double rnorm, double snorm, const StopRule& stop) {
  if (rnorm == 0.0) return true;
  return stop.residual_tol && rnorm <= *stop.residual_tol * snorm;
}

// Index of the largest |corr_j| among allowed atoms; -1 if all are zero or
// excluded. Strict comparison keeps the lowest index on ties.
Index argmax_abs(const Vector& corr, const std::vector<bool>* excluded) {
  Index best = -1;
  double best_val = 0.0;
  for (Index j = 0; j < corr.size(); ++j) {
    if (excluded && (*excluded)[static_cast<std::size_t>(j)]) continue;
    const double v = std::abs(corr[j]);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  return best;
}

Vector correlations(const Frame& phi, const Vector& r) {
  Vector corr(phi.cols());
  kernels::gemv_t({phi.data(), static_cast<std::size_t>(phi.size())}, static_cast<std::size_t>(phi.rows()),
                  as_span(r), as_span(corr));
  return corr;
}

// Least squares restricted to `support`: QR when the columns are independent,
// pseudoinverse otherwise.
Vector restricted_fit(const Frame& phi, const Signal& s, const std::vector<Index>& support, bool& rank_deficient) {
  const Matrix sub = select_columns(phi, support);
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  qr.setThreshold(1e-12);
  if (qr.rank() == sub.cols()) return qr.solve(s);
  rank_deficient = true;
  return least_squares(sub, s);
}

struct OrthoState {
  std::vector<Index> support;
  std::vector<bool> selected;
  Vector coeffs;
  Vector residual;
  bool rank_deficient = false;
};

void refit(const Frame& phi, const Signal& s, OrthoState& st) {
  st.coeffs = restricted_fit(phi, s, st.support, st.rank_deficient);
  st.residual = s;
  for (std::size_t t = 0; t < st.support.size(); ++t) {
    kernels::axpy(-st.coeffs[static_cast<Index>(t)], column_span(phi, st.support[t]), as_span(st.residual));
  }
}

RecoveryResult finish(const Frame& phi, const Signal& s, const OrthoState& st, int iterations, bool converged,
                      std::vector<double> trace) {
  Vector dense = Vector::Zero(phi.cols());
  for (std::size_t t = 0; t < st.support.size(); ++t) dense[st.support[t]] = st.coeffs[static_cast<Index>(t)];
  RecoveryResult out;
  out.code = SparseCode(std::move(dense));
  out.residual_norm = residual_norm(phi, out.code.values(), s);
  out.iterations = iterations;
  out.converged = converged;
  out.objective_trace = std::move(trace);
  if (st.rank_deficient) out.warnings.emplace_back("rank_deficient_support");
  return out;
}

// Shared OMP / LS-OMP driver; `select` returns the next atom or -1.
template <class Select>
RecoveryResult orthogonal_pursuit(const Frame& phi, const Signal& s, const StopRule& stop, Select&& select) {
  const Index m = phi.cols();
  const double snorm = s.norm();
  OrthoState st;
  st.selected.assign(static_cast<std::size_t>(m), false);
  st.residual = s;
  st.coeffs.resize(0);
  std::vector<double> trace{snorm};
  const int cap = static_cast<int>(std::min<Index>(stop.max_iterations, m));
  int it = 0;
  bool converged = false;
  for (;;) {
    const double rnorm = trace.back();
    if (residual_small(rnorm, snorm, stop)) {
      converged = true;
      break;
    }
    if (stop.max_sparsity && static_cast<Index>(st.support.size()) >= *stop.max_sparsity) {
      converged = true;
      break;
    }
    if (it >= cap) break;
    const Index j = select(st);
    if (j < 0) break;
    st.support.push_back(j);
    st.selected[static_cast<std::size_t>(j)] = true;
    refit(phi, s, st);
    ++it;
    trace.push_back(st.residual.norm());
  }
  return finish(phi, s, st, it, converged, std::move(trace));
}

}  // namespace

RecoveryResult mp(const Frame& phi, const Signal& s, const StopRule& stop) {
  check_inputs(phi, s, stop, "mp");
  const double snorm = s.norm();
  Vector code = Vector::Zero(phi.cols());
  Vector r = s;
  std::vector<double> trace{snorm};
  Index distinct = 0;
  int it = 0;
  bool converged = false;
  for (;;) {
    if (residual_small(trace.back(), snorm, stop)) {
      converged = true;
      break;
    }
    if (stop.max_sparsity && distinct >= *stop.max_sparsity) {
      converged = true;
      break;
    }
    if (it >= stop.max_iterations) break;
    const Vector corr = correlations(phi, r);
    const Index j = argmax_abs(corr, nullptr);
    if (j < 0) break;
    if (code[j] == 0.0) ++distinct;
    code[j] += corr[j];
    kernels::axpy(-corr[j], column_span(phi, j), as_span(r));
    ++it;
    trace.push_back(r.norm());
  }
  RecoveryResult out;
  out.code = SparseCode(std::move(code));
  out.residual_norm = residual_norm(phi, out.code.values(), s);
  out.iterations = it;
  out.converged = converged;
  out.objective_trace = std::move(trace);
  return out;
}

RecoveryResult omp(const Frame& phi, const Signal& s, const StopRule& stop) {
  check_inputs(phi, s, stop, "omp");
  return orthogonal_pursuit(phi, s, stop, [&](const OrthoState& st) {
    return argmax_abs(correlations(phi, st.residual), &st.selected);
  });
}

RecoveryResult ls_omp(const Frame& phi, const Signal& s, const StopRule& stop) {
  check_inputs(phi, s, stop, "ls_omp");
  const Index m = phi.cols();
  // Orthonormal basis of span(Phi_support), extended by two-pass Gram-Schmidt.
  Matrix q(phi.rows(), 0);
  std::size_t absorbed = 0;
  const Vector col_sq = phi.colwise().squaredNorm().transpose();
  Vector proj_sq = Vector::Zero(m);  // ||Q^T phi_j||^2
  return orthogonal_pursuit(phi, s, stop, [&](const OrthoState& st) -> Index {
    for (; absorbed < st.support.size(); ++absorbed) {
      Vector v = phi.col(st.support[absorbed]);
      for (int pass = 0; pass < 2; ++pass) v -= q * (q.transpose() * v);
      const double nv = v.norm();
      if (nv <= 1e-10) continue;
      v /= nv;
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v;
      proj_sq += correlations(phi, v).cwiseAbs2();
    }
    // New residual with j added is ||r||^2 - (phi_j^T r)^2 / ||P_perp phi_j||^2.
    const Vector corr = correlations(phi, st.residual);
    const double r2 = st.residual.squaredNorm();
    Index best = -1;
    double best_res = r2;
    for (Index j = 0; j < m; ++j) {
      if (st.selected[static_cast<std::size_t>(j)]) continue;
      const double orth = col_sq[j] - proj_sq[j];
      if (orth <= 1e-12 * col_sq[j]) continue;  // already in the span
      const double candidate = std::max(0.0, r2 - corr[j] * corr[j] / orth);
      if (candidate < best_res) {
        best_res = candidate;
        best = j;
      }
    }
    return best;
  });
}

}  // namespace sparsekit
