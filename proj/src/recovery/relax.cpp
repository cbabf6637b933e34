#include <algorithm>
#include <cmath>

#include "sparsekit/errors.hpp"
#include "sparsekit/relax.hpp"

namespace sparsekit {

void Sl0Config::validate() const {
  for (std::size_t i = 0; i < sigma_schedule.size(); ++i) {
    if (!(sigma_schedule[i] > 0.0)) throw InvalidArgument("sl0: sigma schedule must be positive");
    if (i > 0 && !(sigma_schedule[i] < sigma_schedule[i - 1])) {
      throw InvalidArgument("sl0: sigma schedule must be strictly decreasing");
    }
  }
  if (!(sigma_decay > 0.0 && sigma_decay < 1.0)) throw InvalidArgument("sl0: sigma_decay must lie in (0, 1)");
  if (!(sigma_min > 0.0)) throw InvalidArgument("sl0: sigma_min must be positive");
  if (inner_steps < 1) throw InvalidArgument("sl0: inner_steps must be >= 1");
  if (!(step_mu > 0.0)) throw InvalidArgument("sl0: step_mu must be positive");
  if (!(threshold >= 0.0)) throw InvalidArgument("sl0: threshold must be >= 0");
}

void LimapsConfig::validate() const {
  for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
    if (!(lambda_schedule[i] > 0.0)) throw InvalidArgument("limaps: lambda schedule must be positive");
    if (i > 0 && !(lambda_schedule[i] > lambda_schedule[i - 1])) {
      throw InvalidArgument("limaps: lambda schedule must be strictly increasing");
    }
  }
  if (!(lambda_growth > 1.0)) throw InvalidArgument("limaps: lambda_growth must exceed 1");
  if (max_iterations < 1) throw InvalidArgument("limaps: max_iterations must be >= 1");
  if (!(convergence_tol >= 0.0)) throw InvalidArgument("limaps: convergence_tol must be >= 0");
  if (!(threshold >= 0.0)) throw InvalidArgument("limaps: threshold must be >= 0");
}

void FocussConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("focuss: q must lie in (0, 1]");
  if (max_iterations < 1) throw InvalidArgument("focuss: max_iterations must be >= 1");
  if (!(fixed_point_tol >= 0.0)) throw InvalidArgument("focuss: fixed_point_tol must be >= 0");
  if (!(zero_clamp >= 0.0 && zero_clamp < 1e-8)) throw InvalidArgument("focuss: zero_clamp must lie in [0, 1e-8)");
  if (!(threshold >= 0.0)) throw InvalidArgument("focuss: threshold must be >= 0");
}

double smoothed_l0(const Vector& alpha, double sigma) {
  const double c = 1.0 / (2.0 * sigma * sigma);
  return (-(alpha.array().square()) * c).exp().sum();
}

Vector sl0_ascent_step(const Vector& alpha, double sigma, double mu) {
  const double c = 1.0 / (2.0 * sigma * sigma);
  const Vector delta = (alpha.array() * (-(alpha.array().square()) * c).exp()).matrix();
  return alpha - mu * delta;
}

Vector limaps_shrink(const Vector& alpha, double lambda) {
  return (alpha.array() * (1.0 - (-lambda * alpha.array().abs()).exp())).matrix();
}

namespace {

void check_system(const Frame& phi, const Signal& s, const char* who) {
  if (phi.size() == 0) throw InvalidArgument(std::string(who) + ": empty frame");
  if (s.size() != phi.rows()) throw InvalidArgument(std::string(who) + ": signal length != frame rows");
  if (!phi.allFinite() || !s.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite input");
}

// Pseudoinverse of a full-row-rank frame; refuses rank-deficient input.
Matrix full_row_rank_pinv(const Frame& phi, const char* who) {
  const Svd d = svd(phi);
  const Vector& sv = d.singular_values;
  if (sv.size() < phi.rows() || sv[0] == 0.0 || sv[phi.rows() - 1] <= 1e-10 * sv[0]) {
    throw InvalidArgument(std::string(who) + ": frame must have full row rank");
  }
  return d.v * sv.cwiseInverse().asDiagonal() * d.u.transpose();
}

// alpha - Phi^+ (Phi alpha - s): nearest point of the solution set.
void project(const Frame& phi, const Matrix& pinv, const Signal& s, Vector& alpha) {
  const Vector r = phi * alpha - s;
  alpha.noalias() -= pinv * r;
}

RecoveryResult package(const Frame& phi, const Signal& s, const Vector& iterate, double threshold, int iterations,
                       bool converged, std::vector<double> trace) {
  RecoveryResult out;
  out.code = SparseCode::thresholded(iterate, threshold);
  out.residual_norm = residual_norm(phi, out.code.values(), s);
  out.iterations = iterations;
  out.converged = converged;
  out.objective_trace = std::move(trace);
  return out;
}

}  // namespace

RecoveryResult sl0(const Frame& phi, const Signal& s, const Sl0Config& cfg) {
  cfg.validate();
  check_system(phi, s, "sl0");
  const Matrix pinv = full_row_rank_pinv(phi, "sl0");
  Vector alpha = pinv * s;

  std::vector<double> sigmas = cfg.sigma_schedule;
  if (sigmas.empty()) {
    const double amax = alpha.cwiseAbs().maxCoeff();
    if (amax > 0.0) {
      for (double sigma = 2.0 * amax; sigma >= cfg.sigma_min; sigma *= cfg.sigma_decay) sigmas.push_back(sigma);
    }
  }

  std::vector<double> trace;
  int it = 0;
  for (double sigma : sigmas) {
    const Vector before = alpha;
    for (int l = 0; l < cfg.inner_steps; ++l) {
      alpha = sl0_ascent_step(alpha, sigma, cfg.step_mu);
      project(phi, pinv, s, alpha);
    }
    ++it;
    trace.push_back((alpha - before).norm());
    if (cfg.observer) cfg.observer(it, alpha);
  }
  return package(phi, s, alpha, cfg.threshold, it, true, std::move(trace));
}

RecoveryResult limaps(const Frame& phi, const Signal& s, const LimapsConfig& cfg) {
  cfg.validate();
  check_system(phi, s, "limaps");
  const Matrix pinv = full_row_rank_pinv(phi, "limaps");
  Vector alpha = pinv * s;
  const double amax = alpha.cwiseAbs().maxCoeff();
  if (amax == 0.0) return package(phi, s, alpha, cfg.threshold, 0, true, {});

  const auto schedule_size = static_cast<int>(cfg.lambda_schedule.size());
  const int cap = schedule_size > 0 ? std::min(cfg.max_iterations, schedule_size) : cfg.max_iterations;
  double lambda = schedule_size > 0 ? cfg.lambda_schedule[0] : 1.0 / amax;

  std::vector<double> trace;
  bool converged = false;
  int it = 0;
  while (it < cap) {
    Vector next = limaps_shrink(alpha, lambda);
    project(phi, pinv, s, next);
    const double step = (next - alpha).norm();
    const double scale = next.norm();
    alpha = std::move(next);
    ++it;
    trace.push_back(step);
    if (cfg.observer) cfg.observer(it, alpha);
    if (step <= cfg.convergence_tol * scale) {
      converged = true;
      break;
    }
    lambda = schedule_size > 0 ? cfg.lambda_schedule[static_cast<std::size_t>(std::min(it, schedule_size - 1))]
                               : lambda * cfg.lambda_growth;
  }
  return package(phi, s, alpha, cfg.threshold, it, converged, std::move(trace));
}

RecoveryResult focuss(const Frame& phi, const Signal& s, const FocussConfig& cfg) {
  cfg.validate();
  check_system(phi, s, "focuss");
  Vector beta = full_row_rank_pinv(phi, "focuss") * s;
  const double t = cfg.t();
  std::vector<bool> dead(static_cast<std::size_t>(phi.cols()), false);

  auto clamp = [&](Vector& b) {
    for (Index i = 0; i < b.size(); ++i) {
      if (dead[static_cast<std::size_t>(i)] || std::abs(b[i]) <= cfg.zero_clamp) {
        b[i] = 0.0;
        dead[static_cast<std::size_t>(i)] = true;
      }
    }
  };
  clamp(beta);

  std::vector<double> trace;
  bool converged = false;
  int it = 0;
  while (it < cfg.max_iterations) {
    std::vector<Index> live;
    for (Index i = 0; i < beta.size(); ++i) {
      if (!dead[static_cast<std::size_t>(i)]) live.push_back(i);
    }
    if (live.empty()) {
      converged = s.norm() == 0.0;
      break;
    }
    // beta <- B (Phi B)^+ s restricted to the live columns; zero rows of B
    // contribute nothing.
    Vector w(static_cast<Index>(live.size()));
    Matrix phib(phi.rows(), w.size());
    for (std::size_t k = 0; k < live.size(); ++k) {
      w[static_cast<Index>(k)] = std::pow(std::abs(beta[live[k]]), t);
      phib.col(static_cast<Index>(k)) = phi.col(live[k]) * w[static_cast<Index>(k)];
    }
    const Vector z = least_squares(phib, s);
    Vector next = Vector::Zero(beta.size());
    for (std::size_t k = 0; k < live.size(); ++k) next[live[k]] = w[static_cast<Index>(k)] * z[static_cast<Index>(k)];
    clamp(next);

    const double step = (next - beta).norm();
    const double scale = next.norm();
    beta = std::move(next);
    ++it;
    trace.push_back(step);
    if (cfg.observer) cfg.observer(it, beta);
    if (step <= cfg.fixed_point_tol * std::max(scale, 1e-300)) {
      converged = true;
      break;
    }
  }
  return package(phi, s, beta, cfg.threshold, it, converged, std::move(trace));
}

}  // namespace sparsekit
