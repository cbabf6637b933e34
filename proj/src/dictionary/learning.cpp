#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "sparsekit/dictionary.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/frame_analysis.hpp"
#include "sparsekit/greedy.hpp"

namespace sparsekit {

SparseCoder omp_coder() {
  return [](const Frame& d, const Signal& y, Index k) { return omp(d, y, StopRule::sparsity(k)); };
}

SparseCoder exhaustive_coder() {
  return [](const Frame& d, const Signal& y, Index k) { return exhaustive_p0(d, y, k); };
}

CodingResult sparse_coding_step(const Frame& d, const Matrix& y, Index k, const SparseCoder& coder) {
  if (d.rows() != y.rows()) throw InvalidArgument("sparse_coding_step: dictionary and data row counts differ");
  if (k < 0) throw InvalidArgument("sparse_coding_step: k must be >= 0");
  if (!has_unit_columns(d, 1e-10)) throw InvalidArgument("sparse_coding_step: dictionary atoms must be unit norm");
  const SparseCoder& code = coder ? coder : omp_coder();
  CodingResult out;
  out.x = Matrix::Zero(d.cols(), y.cols());
  Signal col(y.rows());
  for (Index l = 0; l < y.cols(); ++l) {
    col = y.col(l);
    try {
      RecoveryResult r = code(d, col, k);
      if (r.code.sparsity() > k) {
        out.failed.push_back(l);
        continue;
      }
      out.x.col(l) = r.code.values();
    } catch (const Error&) {
      out.failed.push_back(l);
    }
  }
  return out;
}

namespace {

// Replaces atom j with the residual column of largest norm not already taken.
// Returns false when every candidate residual is zero.
bool reseed_atom(Frame& d, Index j, const Matrix& resid, std::vector<bool>& taken) {
  Index best = -1;
  double best_norm = 0.0;
  for (Index l = 0; l < resid.cols(); ++l) {
    if (taken[static_cast<std::size_t>(l)]) continue;
    const double v = resid.col(l).squaredNorm();
    if (v > best_norm) {
      best_norm = v;
      best = l;
    }
  }
  if (best < 0) return false;
  taken[static_cast<std::size_t>(best)] = true;
  d.col(j) = resid.col(best) / std::sqrt(best_norm);
  return true;
}

bool row_unused(const Matrix& x, Index i) { return (x.row(i).array() == 0.0).all(); }

void check_shapes(const Frame& d, const Matrix& x, const Matrix& y, const char* who) {
  if (d.rows() != y.rows() || d.cols() != x.rows() || x.cols() != y.cols()) {
    throw InvalidArgument(std::string(who) + ": inconsistent D, X, Y shapes");
  }
}

// Leading singular pair of e through the smaller Gram matrix: returns unit u
// and x = e^T u = sigma_1 v_1.
void rank_one(const Matrix& e, Vector& u, Vector& x) {
  if (e.rows() <= e.cols()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e * e.transpose());
    u = eig.eigenvectors().col(e.rows() - 1);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e.transpose() * e);
    const Vector v = eig.eigenvectors().col(e.cols() - 1);
    u = e * v;
    const double nu = u.norm();
    if (nu == 0.0) {
      u.setZero();
      x = Vector::Zero(e.cols());
      return;
    }
    u /= nu;
  }
  x = e.transpose() * u;
}

std::vector<Index> used_columns(const Matrix& x, std::span<const Index> rows) {
  std::vector<Index> cols;
  for (Index l = 0; l < x.cols(); ++l) {
    for (Index i : rows) {
      if (x(i, l) != 0.0) {
        cols.push_back(l);
        break;
      }
    }
  }
  return cols;
}

}  // namespace

DictUpdate mod_update(const Frame& d, const Matrix& x, const Matrix& y) {
  check_shapes(d, x, y, "mod_update");
  DictUpdate out;
  out.d = y * pseudoinverse(x);
  out.x = x;
  const Matrix resid = y - out.d * x;
  std::vector<bool> taken(static_cast<std::size_t>(y.cols()), false);
  for (Index j = 0; j < out.d.cols(); ++j) {
    const double c = out.d.col(j).norm();
    if (c == 0.0 || row_unused(x, j)) {
      // The row is zero, so the fit does not depend on this atom.
      if (!reseed_atom(out.d, j, resid, taken)) out.d.col(j) = d.col(j);
      out.x.row(j).setZero();
      out.reseeded.push_back(j);
      continue;
    }
    out.d.col(j) /= c;
    out.x.row(j) *= c;
  }
  return out;
}

DictUpdate ksvd_update(const Frame& d, const Matrix& x, const Matrix& y) {
  check_shapes(d, x, y, "ksvd_update");
  DictUpdate out{d, x, {}};
  Matrix resid = y - d * x;
  std::vector<bool> taken(static_cast<std::size_t>(y.cols()), false);
  Vector u;
  Vector coef;
  for (Index h = 0; h < d.cols(); ++h) {
    const Index row[] = {h};
    const std::vector<Index> omega = used_columns(out.x, row);
    if (omega.empty()) {
      if (reseed_atom(out.d, h, resid, taken)) out.reseeded.push_back(h);
      continue;
    }
    Matrix e(y.rows(), static_cast<Index>(omega.size()));
    for (std::size_t t = 0; t < omega.size(); ++t) {
      const Index l = omega[t];
      e.col(static_cast<Index>(t)) = resid.col(l) + out.d.col(h) * out.x(h, l);
    }
    rank_one(e, u, coef);
    if (u.squaredNorm() == 0.0) u = out.d.col(h);  // e == 0: keep the atom, drop its row
    out.d.col(h) = u;
    for (std::size_t t = 0; t < omega.size(); ++t) {
      const Index l = omega[t];
      const double c = coef[static_cast<Index>(t)];
      out.x(h, l) = c;
      resid.col(l) = e.col(static_cast<Index>(t)) - u * c;
    }
  }
  return out;
}

Matrix procrustes_rotation(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("procrustes_rotation: matrix must be square");
  const Svd f = svd(m);
  return f.u * f.v.transpose();
}

std::vector<Index> popularity_order(const Matrix& x) {
  std::vector<Index> usage(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) usage[static_cast<std::size_t>(i)] = (x.row(i).array() != 0.0).count();
  std::vector<Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return usage[static_cast<std::size_t>(a)] < usage[static_cast<std::size_t>(b)];
  });
  return order;
}

DictUpdate rsvd_update(const Frame& d, const Matrix& x, const Matrix& y, Index group_size) {
  check_shapes(d, x, y, "rsvd_update");
  if (group_size < 1) throw InvalidArgument("rsvd_update: group size must be >= 1");
  DictUpdate out{d, x, {}};
  Matrix resid = y - d * x;

  std::vector<bool> taken(static_cast<std::size_t>(y.cols()), false);
  for (Index j = 0; j < d.cols(); ++j) {
    if (row_unused(x, j) && reseed_atom(out.d, j, resid, taken)) out.reseeded.push_back(j);
  }

  const std::vector<Index> order = popularity_order(x);
  for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(group_size)) {
    const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(group_size));
    const std::span<const Index> group(order.data() + start, stop - start);
    const std::vector<Index> omega = used_columns(x, group);
    if (omega.empty()) continue;

    const auto g = static_cast<Index>(group.size());
    const auto w = static_cast<Index>(omega.size());
    Matrix xg(g, w);
    for (Index a = 0; a < g; ++a) {
      for (Index b = 0; b < w; ++b) xg(a, b) = x(group[static_cast<std::size_t>(a)], omega[static_cast<std::size_t>(b)]);
    }
    const Matrix dg = select_columns(out.d, group);
    const Matrix h = dg * xg;
    if (h.squaredNorm() == 0.0) continue;
    Matrix e(y.rows(), w);
    for (Index b = 0; b < w; ++b) e.col(b) = resid.col(omega[static_cast<std::size_t>(b)]) + h.col(b);

    const Matrix r = procrustes_rotation(e * h.transpose());
    const Matrix dg_new = r * dg;
    for (Index a = 0; a < g; ++a) out.d.col(group[static_cast<std::size_t>(a)]) = dg_new.col(a);
    const Matrix fit = dg_new * xg;
    for (Index b = 0; b < w; ++b) resid.col(omega[static_cast<std::size_t>(b)]) = e.col(b) - fit.col(b);
  }
  return out;
}

std::string_view to_string(DictAlgorithm a) {
  switch (a) {
    case DictAlgorithm::Mod: return "mod";
    case DictAlgorithm::Ksvd: return "ksvd";
    case DictAlgorithm::Rsvd: return "rsvd";
  }
  return "?";
}

DictAlgorithm parse_dict_algorithm(std::string_view name) {
  if (name == "mod") return DictAlgorithm::Mod;
  if (name == "ksvd") return DictAlgorithm::Ksvd;
  if (name == "rsvd") return DictAlgorithm::Rsvd;
  throw InvalidArgument("unknown dictionary algorithm '" + std::string(name) + "' (valid: mod, ksvd, rsvd)");
}

void LearnConfig::validate(const Matrix& y) const {
  const Index n = y.rows();
  if (y.size() == 0) throw InvalidArgument("learn: empty training set");
  if (!y.allFinite()) throw InvalidArgument("learn: non-finite training data");
  for (Index l = 0; l < y.cols(); ++l) {
    if (y.col(l).squaredNorm() == 0.0) throw InvalidArgument("learn: training column " + std::to_string(l) + " is zero");
  }
  if (atoms < 1) throw InvalidArgument("learn: atoms must be >= 1");
  if (sparsity < 1 || sparsity >= n) throw InvalidArgument("learn: sparsity must satisfy 1 <= k < n");
  if (iterations < 0) throw InvalidArgument("learn: iterations must be >= 0");
  if (group_size < 1) throw InvalidArgument("learn: group_size must be >= 1");
  if (y.cols() < atoms) throw InvalidArgument("learn: need at least as many examples as atoms");
  if (initial && (initial->rows() != n || initial->cols() != atoms)) {
    throw InvalidArgument("learn: initial dictionary has the wrong shape");
  }
}

LearnTrace learn(const Matrix& y, const LearnConfig& cfg) {
  cfg.validate(y);
  using Clock = std::chrono::steady_clock;
  const SparseCoder coder = cfg.coder ? cfg.coder : omp_coder();

  LearnTrace trace;
  if (cfg.initial) {
    trace.dictionary = normalize_columns(*cfg.initial);
  } else {
    Engine eng = cfg.rng.engine();
    std::vector<Index> idx(static_cast<std::size_t>(y.cols()));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < cfg.atoms; ++i) {
      std::uniform_int_distribution<Index> pick(i, y.cols() - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(eng))]);
    }
    idx.resize(static_cast<std::size_t>(cfg.atoms));
    trace.dictionary = normalize_columns(select_columns(y, idx));
  }

  CodingResult coded = sparse_coding_step(trace.dictionary, y, cfg.sparsity, coder);
  trace.coding_failures += coded.failed.size();
  trace.codes = std::move(coded.x);
  trace.e_snr.push_back(e_snr(y, trace.dictionary, trace.codes));

  for (int t = 1; t <= cfg.iterations; ++t) {
    const auto t0 = Clock::now();
    if (t > 1) {
      coded = sparse_coding_step(trace.dictionary, y, cfg.sparsity, coder);
      trace.coding_failures += coded.failed.size();
      trace.codes = std::move(coded.x);
    }
    UpdateCheck check;
    check.before = (y - trace.dictionary * trace.codes).norm();
    DictUpdate up;
    switch (cfg.algorithm) {
      case DictAlgorithm::Mod: up = mod_update(trace.dictionary, trace.codes, y); break;
      case DictAlgorithm::Ksvd: up = ksvd_update(trace.dictionary, trace.codes, y); break;
      case DictAlgorithm::Rsvd: up = rsvd_update(trace.dictionary, trace.codes, y, cfg.group_size); break;
    }
    trace.dictionary = std::move(up.d);
    trace.codes = std::move(up.x);
    check.after = (y - trace.dictionary * trace.codes).norm();
    trace.updates.push_back(check);
    trace.e_snr.push_back(e_snr(y, trace.dictionary, trace.codes));
    trace.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return trace;
}

double e_snr(const Matrix& y, const Frame& d, const Matrix& x) {
  const double signal = y.norm();
  if (signal == 0.0) throw InvalidArgument("e_snr: Y is zero");
  const double err = (y - d * x).norm();
  if (err == 0.0) return kSnrCap;
  return std::min(kSnrCap, 20.0 * std::log10(signal / err));
}

}  // namespace sparsekit
