#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsekit/errors.hpp"
#include "sparsekit/kernels.hpp"
#include "sparsekit/lp.hpp"

namespace sparsekit {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

void StandardFormLp::validate() const {
  if (constraints.cols() != cost.size()) throw InvalidArgument("lp: cost length != constraint columns");
  if (constraints.rows() != rhs.size()) throw InvalidArgument("lp: rhs length != constraint rows");
  if (!constraints.allFinite() || !cost.allFinite() || !rhs.allFinite()) {
    throw InvalidArgument("lp: non-finite data");
  }
}

namespace {

// Row-major tableau. Column 0 holds the right-hand side, columns 1..N the
// structural variables, columns N+1.. the phase-one artificials.
class Tableau {
 public:
  Tableau(const StandardFormLp& lp, const LpOptions& opt) : opt_(opt) {
    rows_ = lp.rows();
    vars_ = lp.variables();

    // Orient rows so that b >= 0, then look for ready-made unit columns.
    std::vector<double> sign(static_cast<std::size_t>(rows_), 1.0);
    for (Index i = 0; i < rows_; ++i) {
      if (lp.rhs[i] < 0.0) sign[static_cast<std::size_t>(i)] = -1.0;
    }
    basis_.assign(static_cast<std::size_t>(rows_), -1);
    for (Index j = 0; j < vars_; ++j) {
      Index hit = -1;
      bool unit = true;
      for (Index i = 0; i < rows_ && unit; ++i) {
        const double v = lp.constraints(i, j) * sign[static_cast<std::size_t>(i)];
        if (v == 0.0) continue;
        if (v == 1.0 && hit < 0) {
          hit = i;
        } else {
          unit = false;
        }
      }
      if (unit && hit >= 0 && basis_[static_cast<std::size_t>(hit)] < 0) {
        basis_[static_cast<std::size_t>(hit)] = static_cast<long>(j);
      }
    }
    artificials_ = 0;
    for (long b : basis_) {
      if (b < 0) ++artificials_;
    }
    width_ = 1 + vars_ + artificials_;
    data_.assign(static_cast<std::size_t>(rows_ * width_), 0.0);
    Index next_art = 0;
    for (Index i = 0; i < rows_; ++i) {
      double* r = row(i);
      const double s = sign[static_cast<std::size_t>(i)];
      r[0] = lp.rhs[i] * s;
      for (Index j = 0; j < vars_; ++j) r[1 + j] = lp.constraints(i, j) * s;
      if (basis_[static_cast<std::size_t>(i)] < 0) {
        r[1 + vars_ + next_art] = 1.0;
        basis_[static_cast<std::size_t>(i)] = static_cast<long>(vars_ + next_art);
        ++next_art;
      }
    }
    active_.assign(static_cast<std::size_t>(rows_), true);
    reduced_.assign(static_cast<std::size_t>(width_), 0.0);
  }

  LpSolution solve(const Vector& cost) {
    LpSolution out;
    // Phase one: minimize the sum of artificials.
    if (artificials_ > 0) {
      std::fill(reduced_.begin(), reduced_.end(), 0.0);
      for (Index a = 0; a < artificials_; ++a) reduced_[static_cast<std::size_t>(1 + vars_ + a)] = 1.0;
      for (Index i = 0; i < rows_; ++i) {
        if (is_artificial(basis_[static_cast<std::size_t>(i)])) {
          kernels::axpy(-1.0, {row(i), static_cast<std::size_t>(width_)},
                        {reduced_.data(), static_cast<std::size_t>(width_)});
        }
      }
      const LpStatus st = iterate(width_, out.pivots);
      if (st == LpStatus::IterationLimit) {
        out.status = st;
        return out;
      }
      const double infeasibility = -reduced_[0];
      double bscale = 1.0;
      for (Index i = 0; i < rows_; ++i) bscale = std::max(bscale, std::abs(row(i)[0]));
      if (infeasibility > opt_.feasibility_tol * bscale) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      drive_out_artificials();
    }

    // Phase two on the structural columns only.
    const Index w = 1 + vars_;
    std::fill(reduced_.begin(), reduced_.end(), 0.0);
    for (Index j = 0; j < vars_; ++j) reduced_[static_cast<std::size_t>(1 + j)] = cost[j];
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const long b = basis_[static_cast<std::size_t>(i)];
      const double cb = cost[b];
      if (cb != 0.0) {
        kernels::axpy(-cb, {row(i), static_cast<std::size_t>(w)}, {reduced_.data(), static_cast<std::size_t>(w)});
      }
    }
    out.status = iterate(w, out.pivots);
    if (out.status != LpStatus::Optimal) return out;

    out.x = Vector::Zero(vars_);
    std::vector<bool> basic(static_cast<std::size_t>(vars_), false);
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const long b = basis_[static_cast<std::size_t>(i)];
      out.x[b] = std::max(0.0, row(i)[0]);
      basic[static_cast<std::size_t>(b)] = true;
    }
    out.objective = cost.dot(out.x);
    for (Index j = 0; j < vars_; ++j) {
      if (!basic[static_cast<std::size_t>(j)] &&
          std::abs(reduced_[static_cast<std::size_t>(1 + j)]) <= opt_.optimality_tol) {
        out.alternate_optima = true;
        break;
      }
    }
    return out;
  }

 private:
  double* row(Index i) { return data_.data() + i * width_; }
  bool is_artificial(long col) const { return col >= static_cast<long>(vars_); }

  // Runs simplex pivots over columns [1, w) until optimal, unbounded, or the
  // pivot budget runs out.
  LpStatus iterate(Index w, long& pivots) {
    bool bland = false;
    for (;;) {
      if (pivots >= opt_.max_pivots) return LpStatus::IterationLimit;
      Index enter = -1;
      if (bland) {
        for (Index j = 1; j < w; ++j) {
          if (reduced_[static_cast<std::size_t>(j)] < -opt_.optimality_tol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -opt_.optimality_tol;
        for (Index j = 1; j < w; ++j) {
          if (reduced_[static_cast<std::size_t>(j)] < best) {
            best = reduced_[static_cast<std::size_t>(j)];
            enter = j;
          }
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      Index leave = -1;
      double best_ratio = 0.0;
      double best_pivot = 0.0;
      for (Index i = 0; i < rows_; ++i) {
        if (!active_[static_cast<std::size_t>(i)]) continue;
        const double a = row(i)[enter];
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, row(i)[0]) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 * std::max(1.0, best_ratio)) {
          leave = i;
          best_ratio = ratio;
          best_pivot = a;
        } else if (ratio <= best_ratio + 1e-12 * std::max(1.0, best_ratio)) {
          const bool take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]
                                  : a > best_pivot;
          if (take) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
            best_pivot = a;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;

      const double before = reduced_[0];
      pivot(leave, enter, w);
      ++pivots;
      // reduced_[0] holds -objective; a strict increase is real progress.
      bland = !(reduced_[0] > before + opt_.feasibility_tol * 1e-3);
    }
  }

  void pivot(Index r, Index q, Index w) {
    double* pr = row(r);
    const double inv = 1.0 / pr[q];
    for (Index j = 0; j < w; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    const std::span<const double> src(pr, static_cast<std::size_t>(w));
    for (Index i = 0; i < rows_; ++i) {
      if (i == r || !active_[static_cast<std::size_t>(i)]) continue;
      double* pi = row(i);
      const double f = pi[q];
      if (f == 0.0) continue;
      kernels::axpy(-f, src, {pi, static_cast<std::size_t>(w)});
      pi[q] = 0.0;
      if (pi[0] < 0.0 && pi[0] > -opt_.feasibility_tol) pi[0] = 0.0;
    }
    const double f = reduced_[static_cast<std::size_t>(q)];
    if (f != 0.0) {
      kernels::axpy(-f, src, {reduced_.data(), static_cast<std::size_t>(w)});
      reduced_[static_cast<std::size_t>(q)] = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<long>(q - 1);
  }

  void drive_out_artificials() {
    for (Index i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      double* r = row(i);
      Index q = -1;
      double best = opt_.pivot_tol;
      for (Index j = 1; j <= vars_; ++j) {
        if (std::abs(r[j]) > best) {
          best = std::abs(r[j]);
          q = j;
        }
      }
      if (q < 0) {
        active_[static_cast<std::size_t>(i)] = false;  // redundant equality
      } else {
        pivot(i, q, width_);
      }
    }
  }

  LpOptions opt_;
  Index rows_ = 0;
  Index vars_ = 0;
  Index artificials_ = 0;
  Index width_ = 0;
  std::vector<double> data_;
  std::vector<long> basis_;  // structural index, or vars_ + k for artificial k
  std::vector<bool> active_;
  std::vector<double> reduced_;
};

}  // namespace

LpSolution lp_solve(const StandardFormLp& lp, const LpOptions& options) {
  lp.validate();
  if (lp.variables() == 0) throw InvalidArgument("lp: no variables");
  Tableau t(lp, options);
  return t.solve(lp.cost);
}

}  // namespace sparsekit
