#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace panopose {

/// Parameters of y = B + A sin(omega x + phi). Canonical form has A >= 0 and
/// phi in [-pi, pi); phi is 0 when A is 0.
struct SinusoidParams {
  double amplitude = 0.0;  // A, pixels
  double phase = 0.0;      // phi, radians
  double offset = 0.0;     // B, pixels
};

/// Two common prints of the pseudo-Huber loss: delta*(sqrt(1+(c/delta)^2)-1)
/// versus the same with a delta^2 outer factor. Scaling only; identical
/// minimizer.
enum class HuberForm { paper, textbook };

struct FitConfig {
  double delta = 2.0;        // pseudo-Huber scale, pixels
  int max_iters = 200;
  double tol = 1e-10;        // relative cost decrease threshold
  double lambda0 = 1e-3;     // initial LM damping
  HuberForm huber_form = HuberForm::paper;
};

struct FitReport {
  SinusoidParams params;
  int iterations = 0;
  double final_cost = 0.0;
  double inlier_rmse = 0.0;  // RMSE over residuals with |r| <= 3*delta
  bool converged = false;
  bool amplitude_degenerate = false;     // fitted A < 1e-6 px, phase forced to 0
  std::vector<double> cost_trace;        // cost after each accepted LM step
};

struct FitSample {
  double u = 0.0;  // column u_p
  double y = 0.0;  // measured shift
};

double model_eval(const SinusoidParams& params, double omega, double u_p);

double pseudo_huber(double c, double delta, HuberForm form = HuberForm::paper);

/// residual_i = model(u_i) - y_i. Errors on an empty sample set.
std::vector<double> residuals(const SinusoidParams& params, double omega,
                              std::span<const FitSample> samples);

/// Total robustified cost sum_i L(residual_i) and its analytic gradient with
/// respect to (A, phi, B).
double robust_cost(const SinusoidParams& params, double omega,
                   std::span<const FitSample> samples, const FitConfig& config);
Eigen::Vector3d robust_cost_gradient(const SinusoidParams& params, double omega,
                                     std::span<const FitSample> samples,
                                     const FitConfig& config);

/// Levenberg-Marquardt minimization of the pseudo-Huber objective over
/// (A, phi, B). Requires >= 8 finite samples spanning at least half a period.
/// Initialization: B0 = mean(y), (A0, phi0) from the first-harmonic DFT
/// coefficient of the series resampled on a uniform grid.
FitReport fit(std::span<const FitSample> samples, double omega, const FitConfig& config);

}  // namespace panopose
