#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsekit/errors.hpp"
#include "sparsekit/frame_analysis.hpp"

namespace sparsekit {
namespace {

// |cosine| between every pair of columns, zero on the diagonal.
Matrix abs_cosines(const Frame& phi) {
  Vector norms = phi.colwise().norm().transpose();
  for (Index j = 0; j < norms.size(); ++j) {
    if (norms[j] == 0.0) throw InvalidArgument("coherence: zero column " + std::to_string(j));
  }
  Matrix g = phi.transpose() * phi;
  for (Index i = 0; i < g.rows(); ++i) {
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = i == j ? 0.0 : std::abs(g(i, j)) / (norms[i] * norms[j]);
  }
  return g;
}

}  // namespace

double mutual_coherence(const Frame& phi) {
  if (phi.cols() < 2) throw InvalidArgument("mutual_coherence: need at least two atoms");
  return std::min(1.0, abs_cosines(phi).maxCoeff());
}

double welch_bound(Index n, Index m) {
  if (n < 1 || m < 2 || m < n) throw InvalidArgument("welch_bound: need m >= n >= 1 and m >= 2");
  return std::sqrt(static_cast<double>(m - n) / (static_cast<double>(n) * static_cast<double>(m - 1)));
}

double babel(const Frame& phi, Index p) {
  const Index m = phi.cols();
  if (p < 1 || p > m - 1) throw InvalidArgument("babel: p must lie in [1, m-1]");
  if (!has_unit_columns(phi, 1e-10)) throw InvalidArgument("babel: columns must be unit norm");
  const Matrix g = abs_cosines(phi);
  double best = 0.0;
  std::vector<double> row(static_cast<std::size_t>(m - 1));
  for (Index j = 0; j < m; ++j) {
    std::size_t t = 0;
    for (Index i = 0; i < m; ++i) {
      if (i != j) row[t++] = g(j, i);
    }
    std::partial_sort(row.begin(), row.begin() + p, row.end(), std::greater<>());
    best = std::max(best, std::accumulate(row.begin(), row.begin() + p, 0.0));
  }
  return best;
}

double gershgorin_spark_bound(const Frame& phi) {
  const double mu = mutual_coherence(phi);
  if (mu == 0.0) return kInfinity;
  return 1.0 + 1.0 / mu;
}

double best_k_term_error(const Vector& s, Index k, double p) {
  if (!(p > 0.0)) throw InvalidArgument("best_k_term_error: p must be positive");
  if (k < 0 || k > s.size()) throw InvalidArgument("best_k_term_error: k out of range");
  std::vector<Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(s[a]) > std::abs(s[b]); });
  double acc = 0.0;
  for (std::size_t t = static_cast<std::size_t>(k); t < order.size(); ++t) acc += std::pow(std::abs(s[order[t]]), p);
  return std::pow(acc, 1.0 / p);
}

FrameBounds frame_bounds(const Frame& phi) {
  FrameBounds fb;
  const Vector sv = svd(phi).singular_values;
  const double smax = sv[0];
  fb.upper = smax * smax;
  const bool full_row_rank = phi.rows() <= phi.cols() && numerical_rank(phi) == phi.rows();
  if (full_row_rank) {
    const double smin = sv[phi.rows() - 1];
    fb.lower = smin * smin;
  } else {
    fb.rank_deficient = true;
    fb.lower = 0.0;
  }
  fb.tight = !fb.rank_deficient && std::abs(fb.lower - fb.upper) <= 1e-10 * fb.upper;
  fb.parseval = fb.tight && std::abs(fb.lower - 1.0) <= 1e-10;
  if (fb.tight && phi.cols() >= 2 && phi.cols() >= phi.rows() && has_unit_columns(phi, 1e-10)) {
    const double theta = welch_bound(phi.rows(), phi.cols());
    const Matrix g = abs_cosines(phi);
    bool equi = true;
    for (Index i = 0; i < g.rows() && equi; ++i) {
      for (Index j = i + 1; j < g.cols(); ++j) {
        if (std::abs(g(i, j) - theta) > 1e-8) {
          equi = false;
          break;
        }
      }
    }
    fb.etf = equi;
  }
  return fb;
}

FrameReport analyze_frame(const Frame& phi, const ReportOptions& options) {
  if (phi.size() == 0 || !phi.allFinite()) throw InvalidArgument("analyze_frame: empty or non-finite frame");
  FrameReport r;
  r.rows = phi.rows();
  r.cols = phi.cols();
  r.unit_norm = has_unit_columns(phi, 1e-10);
  r.coherence = mutual_coherence(phi);
  if (phi.cols() >= phi.rows()) r.welch = welch_bound(phi.rows(), phi.cols());
  r.gershgorin_bound = gershgorin_spark_bound(phi);
  r.bounds = frame_bounds(phi);
  try {
    r.spark = spark(phi, options.limits);
    r.krank = krank(phi, options.limits);
  } catch (const LimitExceeded& e) {
    r.skipped.push_back(std::string("spark/krank: ") + e.what());
  }
  for (Index k = 1; k <= std::min(options.ric_max_order, phi.cols()); ++k) {
    try {
      r.ric[k] = ric(phi, k, options.limits);
    } catch (const LimitExceeded& e) {
      r.skipped.push_back("ric k=" + std::to_string(k) + ": " + e.what());
      break;
    }
  }
  for (Index k = 1; k <= std::min(options.nsp_max_order, phi.cols()); ++k) {
    try {
      r.nsp[k] = nsp_constant(phi, k, options.limits);
    } catch (const LimitExceeded& e) {
      r.skipped.push_back("nsp k=" + std::to_string(k) + ": " + e.what());
      break;
    }
  }
  return r;
}

}  // namespace sparsekit
