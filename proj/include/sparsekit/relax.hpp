#pragma once
// Relaxation solvers: smoothed-l0 (SL0), LiMapS shrinkage/projection and
// FOCUSS reweighted least squares. Each needs a full-row-rank frame and
// returns its final iterate hard-thresholded at `threshold`.

#include <vector>

#include "sparsekit/core.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit {

struct Sl0Config {
  // Empty schedule: sigma_1 = 2 max|alpha_0|, halved until below sigma_min.
  std::vector<double> sigma_schedule;
  double sigma_decay = 0.5;
  double sigma_min = 1e-10;  // below the reporting threshold, so off-support entries vanish
  int inner_steps = 3;
  double step_mu = 2.0;
  double threshold = 1e-8;
  IterateObserver observer;  // called once per sigma level

  void validate() const;
};

struct LimapsConfig {
  // Empty schedule: lambda_0 = 1 / max|alpha_0|, grown by lambda_growth.
  std::vector<double> lambda_schedule;
  double lambda_growth = 1.05;
  int max_iterations = 2000;
  // On ||alpha_{t+1} - alpha_t|| / ||alpha_t||. The default 0 runs the whole
  // schedule; an early stop leaves ~1e-10 relative bias on the support.
  double convergence_tol = 0.0;
  double threshold = 1e-8;
  IterateObserver observer;

  void validate() const;
};

struct FocussConfig {
  double q = 0.5;
  int max_iterations = 500;
  double fixed_point_tol = 1e-12;  // relative step size
  double zero_clamp = 1e-12;
  double threshold = 1e-8;
  IterateObserver observer;

  double t() const noexcept { return 1.0 - q / 2.0; }
  void validate() const;
};

/// F_sigma(alpha) = sum_i exp(-alpha_i^2 / (2 sigma^2)); tends to m - ||alpha||_0.
double smoothed_l0(const Vector& alpha, double sigma);

/// alpha - mu * (alpha .* exp(-alpha.^2 / (2 sigma^2))): one ascent step on
/// F_sigma before projection.
Vector sl0_ascent_step(const Vector& alpha, double sigma, double mu);

/// a (1 - exp(-lambda |a|)) entrywise.
Vector limaps_shrink(const Vector& alpha, double lambda);

RecoveryResult sl0(const Frame& phi, const Signal& s, const Sl0Config& cfg = {});
RecoveryResult limaps(const Frame& phi, const Signal& s, const LimapsConfig& cfg = {});
RecoveryResult focuss(const Frame& phi, const Signal& s, const FocussConfig& cfg = {});

}  // namespace sparsekit
