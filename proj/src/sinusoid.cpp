#include "panopose/sinusoid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace panopose {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y - kPi;
}

struct Loss {
  double delta;
  HuberForm form;

  double value(double c) const {
    const double s = std::sqrt(1.0 + (c / delta) * (c / delta));
    const double outer = form == HuberForm::paper ? delta : delta * delta;
    return outer * (s - 1.0);
  }
  double derivative(double c) const {
    const double s = std::sqrt(1.0 + (c / delta) * (c / delta));
    return form == HuberForm::paper ? c / (delta * s) : c / s;
  }
  // d rho / d c divided by c, finite at c = 0.
  double weight(double c) const {
    const double s = std::sqrt(1.0 + (c / delta) * (c / delta));
    return form == HuberForm::paper ? 1.0 / (delta * s) : 1.0 / s;
  }
};

void check_samples(std::span<const FitSample> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  for (const FitSample& s : samples)
    if (!std::isfinite(s.u) || !std::isfinite(s.y))
      throw std::invalid_argument("non-finite sample");
}

double total_cost(const SinusoidParams& p, double omega, std::span<const FitSample> samples,
                  const Loss& loss) {
  double cost = 0.0;
  for (const FitSample& s : samples)
    cost += loss.value(model_eval(p, omega, s.u) - s.y);
  return cost;
}

/// B0 from the mean, (A0, phi0) from the first-harmonic DFT coefficient of
/// the series resampled onto a uniform grid over one period.
SinusoidParams initial_guess(std::vector<FitSample> sorted, double omega) {
  const std::size_t n = sorted.size();
  double mean = 0.0;
  for (const FitSample& s : sorted) mean += s.y;
  mean /= static_cast<double>(n);

  const double period = 2.0 * kPi / omega;
  const double u0 = sorted.front().u;
  const auto interpolate = [&](double u) {
    // Linear interpolation with cyclic wrap of the final segment.
    if (u >= sorted.back().u) {
      const double gap = (u0 + period) - sorted.back().u;
      const double t = gap > 1e-12 ? (u - sorted.back().u) / gap : 0.0;
      return (1.0 - t) * sorted.back().y + t * sorted.front().y;
    }
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), u,
                                     [](double value, const FitSample& s) { return value < s.u; });
    const FitSample& hi = *it;
    const FitSample& lo = *(it - 1);
    const double span = hi.u - lo.u;
    const double t = span > 1e-12 ? (u - lo.u) / span : 0.0;
    return (1.0 - t) * lo.y + t * hi.y;
  };

  std::complex<double> first(0.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    const double y = interpolate(u0 + angle / omega);
    first += (y - mean) * std::exp(std::complex<double>(0.0, -angle));
  }
  first *= 2.0 / static_cast<double>(n);

  SinusoidParams p;
  p.offset = mean;
  p.amplitude = std::abs(first);
  p.phase = wrap_pi(std::arg(first) + kPi / 2.0 - omega * u0);
  return p;
}

}  // namespace

double model_eval(const SinusoidParams& params, double omega, double u_p) {
  return params.offset + params.amplitude * std::sin(omega * u_p + params.phase);
}

double pseudo_huber(double c, double delta, HuberForm form) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return Loss{delta, form}.value(c);
}

std::vector<double> residuals(const SinusoidParams& params, double omega,
                              std::span<const FitSample> samples) {
  check_samples(samples);
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = model_eval(params, omega, samples[i].u) - samples[i].y;
  return out;
}

double robust_cost(const SinusoidParams& params, double omega,
                   std::span<const FitSample> samples, const FitConfig& config) {
  check_samples(samples);
  if (!(config.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return total_cost(params, omega, samples, Loss{config.delta, config.huber_form});
}

Eigen::Vector3d robust_cost_gradient(const SinusoidParams& params, double omega,
                                     std::span<const FitSample> samples,
                                     const FitConfig& config) {
  check_samples(samples);
  if (!(config.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const Loss loss{config.delta, config.huber_form};
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (const FitSample& s : samples) {
    const double arg = omega * s.u + params.phase;
    const double r = params.offset + params.amplitude * std::sin(arg) - s.y;
    const double dr = loss.derivative(r);
    g.x() += dr * std::sin(arg);                     // d/dA
    g.y() += dr * params.amplitude * std::cos(arg);  // d/dphi
    g.z() += dr;                                     // d/dB
  }
  return g;
}

FitReport fit(std::span<const FitSample> samples, double omega, const FitConfig& config) {
  check_samples(samples);
  if (!(config.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (samples.size() < 8) throw std::invalid_argument("insufficient samples for fit");

  std::vector<FitSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const FitSample& a, const FitSample& b) { return a.u < b.u; });
  const double span = sorted.back().u - sorted.front().u;
  if (omega * span < kPi - 1e-9)
    throw std::invalid_argument("samples span less than half a period");

  const Loss loss{config.delta, config.huber_form};
  SinusoidParams p = initial_guess(sorted, omega);
  double cost = total_cost(p, omega, sorted, loss);

  FitReport report;
  report.cost_trace.push_back(cost);

  double lambda = config.lambda0;
  int iters = 0;
  bool converged = cost < 1e-30;
  while (!converged && iters < config.max_iters) {
    Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
    Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
    for (const FitSample& s : sorted) {
      const double arg = omega * s.u + p.phase;
      const double sn = std::sin(arg);
      const double cs = std::cos(arg);
      const double r = p.offset + p.amplitude * sn - s.y;
      const Eigen::Vector3d jac(sn, p.amplitude * cs, 1.0);
      gradient += loss.derivative(r) * jac;
      hessian += loss.weight(r) * jac * jac.transpose();
    }
    if (gradient.norm() < 1e-14) {
      converged = true;
      break;
    }
    ++iters;
    Eigen::Matrix3d damped = hessian;
    for (int i = 0; i < 3; ++i)
      damped(i, i) += lambda * std::max(hessian(i, i), 1e-12);
    const Eigen::Vector3d delta_p = damped.ldlt().solve(-gradient);
    if (!delta_p.allFinite()) {
      lambda = std::min(lambda * 10.0, 1e12);
      continue;
    }
    SinusoidParams trial = p;
    trial.amplitude += delta_p.x();
    trial.phase += delta_p.y();
    trial.offset += delta_p.z();
    const double trial_cost = total_cost(trial, omega, sorted, loss);
    if (trial_cost <= cost) {
      const double decrease = (cost - trial_cost) / std::max(cost, 1e-300);
      p = trial;
      cost = trial_cost;
      report.cost_trace.push_back(cost);
      lambda = std::max(lambda / 10.0, 1e-12);
      if (decrease < config.tol) converged = true;
    } else {
      lambda = std::min(lambda * 10.0, 1e12);
    }
  }

  // Canonical form: non-negative amplitude, phase in [-pi, pi).
  if (p.amplitude < 0.0) {
    p.amplitude = -p.amplitude;
    p.phase += kPi;
  }
  p.phase = wrap_pi(p.phase);
  if (p.amplitude < 1e-6) {
    p.phase = 0.0;  // phase unidentifiable at zero amplitude
    report.amplitude_degenerate = true;
  }

  report.params = p;
  report.iterations = iters;
  report.final_cost = cost;
  report.converged = converged;

  double inlier_sq = 0.0;
  std::size_t inliers = 0;
  for (const FitSample& s : sorted) {
    const double r = model_eval(p, omega, s.u) - s.y;
    if (std::abs(r) <= 3.0 * config.delta) {
      inlier_sq += r * r;
      ++inliers;
    }
  }
  report.inlier_rmse = inliers > 0 ? std::sqrt(inlier_sq / static_cast<double>(inliers)) : 0.0;
  return report;
}

}  // namespace panopose
