#include "panopose/fmi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fft.hpp"

namespace panopose {

namespace {

constexpr double kPi = std::numbers::pi;

using Grid = std::vector<double>;  // side x side, row-major

Grid to_grid(const Image& img) {
  Grid g(img.data.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = img.data[i];
  return g;
}

double grid_mean(const Grid& g) {
  double s = 0.0;
  for (double v : g) s += v;
  return g.empty() ? 0.0 : s / static_cast<double>(g.size());
}

double grid_variance(const Grid& g, double mean) {
  double s = 0.0;
  for (double v : g) s += (v - mean) * (v - mean);
  return g.empty() ? 0.0 : s / static_cast<double>(g.size());
}

void subtract_mean(Grid& g) {
  const double m = grid_mean(g);
  for (double& v : g) v -= m;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
  return w;
}

void apodize(Grid& g, int side, const std::vector<double>& w) {
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) g[static_cast<std::size_t>(y) * side + x] *= w[y] * w[x];
}

double bilinear_or_zero(const Grid& g, int side, double x, double y) {
  if (x < 0.0 || y < 0.0 || x > side - 1 || y > side - 1) return 0.0;
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, side - 1);
  const int y1 = std::min(y0 + 1, side - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * g[static_cast<std::size_t>(y0) * side + x0] +
                     fx * g[static_cast<std::size_t>(y0) * side + x1];
  const double bot = (1.0 - fx) * g[static_cast<std::size_t>(y1) * side + x0] +
                     fx * g[static_cast<std::size_t>(y1) * side + x1];
  return (1.0 - fy) * top + fy * bot;
}

/// Content rotated by +angle and magnified by scale about the grid center;
/// samples falling outside come back as 0 (inputs are mean-subtracted).
Grid resample_rot_scale(const Grid& g, int side, double angle, double scale) {
  Grid out(g.size(), 0.0);
  const double c = (side - 1) / 2.0;
  const double ca = std::cos(-angle);
  const double sa = std::sin(-angle);
  const double inv = 1.0 / scale;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = (x - c) * inv;
      const double dy = (y - c) * inv;
      const double sx = c + ca * dx - sa * dy;
      const double sy = c + sa * dx + ca * dy;
      out[static_cast<std::size_t>(y) * side + x] = bilinear_or_zero(g, side, sx, sy);
    }
  }
  return out;
}

/// Magnitude spectrum with DC moved to the center bin (side/2, side/2).
Grid magnitude_shifted(const std::vector<std::complex<double>>& spectrum, int side) {
  Grid mag(spectrum.size());
  const int h = side / 2;
  for (int y = 0; y < side; ++y) {
    const int sy = (y + h) % side;
    for (int x = 0; x < side; ++x) {
      const int sx = (x + h) % side;
      mag[static_cast<std::size_t>(sy) * side + sx] =
          std::abs(spectrum[static_cast<std::size_t>(y) * side + x]);
    }
  }
  return mag;
}

/// (1 - X)(2 - X) with X = cos(pi xi) cos(pi eta): zero at DC, growing towards
/// the spectrum rim. Standard Fourier-Mellin emphasis.
void highpass_emphasis(Grid& mag, int side) {
  std::vector<double> axis(side);
  for (int i = 0; i < side; ++i) axis[i] = std::cos(kPi * (i - side / 2) / side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double t = axis[y] * axis[x];
      mag[static_cast<std::size_t>(y) * side + x] *= (1.0 - t) * (2.0 - t);
    }
  }
}

struct LogPolarGrid {
  Grid data;
  double log_base = 1.0;
};

/// Rows sweep angle over [0, pi), columns sweep radius log-spaced in [1, side/2).
LogPolarGrid log_polar(const Grid& mag, int side) {
  LogPolarGrid lp;
  lp.data.assign(mag.size(), 0.0);
  lp.log_base = std::exp(std::log(side / 2.0) / side);
  const double cx = side / 2.0;
  const double cy = side / 2.0;
  const double angle_step = kPi / side;
  for (int i = 0; i < side; ++i) {
    const double ca = std::cos(angle_step * i);
    const double sa = std::sin(angle_step * i);
    double rho = 1.0;
    for (int j = 0; j < side; ++j) {
      lp.data[static_cast<std::size_t>(i) * side + j] =
          bilinear_or_zero(mag, side, cx + rho * ca, cy + rho * sa);
      rho *= lp.log_base;
    }
  }
  return lp;
}

double wrap_half(double x, int n) {
  if (x > n / 2.0) x -= n;
  return x;
}

double parabolic_offset(double left, double center, double right) {
  const double denom = left - 2.0 * center + right;
  if (std::abs(denom) < 1e-300) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

enum class OnDegenerate { raise, soft_zero };

/// Normalized cross-power spectrum correlation of two equal square grids.
/// Peak location follows the content-motion convention b(p) ~ a(p - d).
PhaseShift correlate_grids(Grid a, Grid b, int side, OnDegenerate mode) {
  const double mean_a = grid_mean(a);
  const double mean_b = grid_mean(b);
  if (grid_variance(a, mean_a) < 1e-12 || grid_variance(b, mean_b) < 1e-12) {
    if (mode == OnDegenerate::raise) throw std::runtime_error("degenerate window");
    return {};
  }
  const std::size_t n = a.size();
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < n; ++i) {
    fa[i] = a[i] - mean_a;
    fb[i] = b[i] - mean_b;
  }
  detail::fft_2d(fa, side, side, false);
  detail::fft_2d(fb, side, side, false);
  std::vector<std::complex<double>> cross(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> q = fb[i] * std::conj(fa[i]);
    const double mag = std::abs(q);
    cross[i] = mag > 1e-300 ? q / mag : std::complex<double>(0.0, 0.0);
  }
  detail::fft_2d(cross, side, side, true);

  int px = 0, py = 0;
  double peak = -1.0;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double v = cross[static_cast<std::size_t>(y) * side + x].real();
      if (v > peak) {
        peak = v;
        px = x;
        py = y;
      }
    }
  }
  const auto surf = [&](int y, int x) {
    return cross[static_cast<std::size_t>((y + side) % side) * side + (x + side) % side].real();
  };
  PhaseShift result;
  result.du = wrap_half(px + parabolic_offset(surf(py, px - 1), peak, surf(py, px + 1)), side);
  result.dv = wrap_half(py + parabolic_offset(surf(py - 1, px), peak, surf(py + 1, px)), side);
  result.response = std::clamp(peak, 0.0, 1.0);
  return result;
}

void validate_window_pair(const Image& a, const Image& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty window");
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("window size mismatch");
  if (a.width != a.height) throw std::invalid_argument("windows must be square");
  if (!detail::is_pow2(a.width))
    throw std::invalid_argument("window side must be a power of two");
}

}  // namespace

PhaseShift phase_correlate(const Image& win_a, const Image& win_b) {
  validate_window_pair(win_a, win_b);
  return correlate_grids(to_grid(win_a), to_grid(win_b), win_a.width, OnDegenerate::raise);
}

RegistrationResult register_window(const Image& win_a, const Image& win_b) {
  validate_window_pair(win_a, win_b);
  const int side = win_a.width;

  Grid a0 = to_grid(win_a);
  Grid b0 = to_grid(win_b);
  subtract_mean(a0);
  subtract_mean(b0);
  if (grid_variance(a0, 0.0) < 1e-12 || grid_variance(b0, 0.0) < 1e-12)
    throw std::runtime_error("degenerate window");

  const std::vector<double> w = hann_window(side);
  Grid aw = a0;
  Grid bw = b0;
  apodize(aw, side, w);
  apodize(bw, side, w);

  const std::size_t n = aw.size();
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < n; ++i) {
    fa[i] = aw[i];
    fb[i] = bw[i];
  }
  detail::fft_2d(fa, side, side, false);
  detail::fft_2d(fb, side, side, false);
  Grid mag_a = magnitude_shifted(fa, side);
  Grid mag_b = magnitude_shifted(fb, side);
  highpass_emphasis(mag_a, side);
  highpass_emphasis(mag_b, side);

  const LogPolarGrid lp_a = log_polar(mag_a, side);
  const LogPolarGrid lp_b = log_polar(mag_b, side);
  const PhaseShift spectral =
      correlate_grids(lp_a.data, lp_b.data, side, OnDegenerate::raise);

  const double rotation_raw = spectral.dv * kPi / side;
  const double scale = std::pow(lp_a.log_base, -spectral.du);

  // The magnitude spectrum is point-symmetric, so the measured rotation is
  // only known modulo pi; the stronger translation peak picks the branch.
  const double candidates[2] = {rotation_raw,
                                rotation_raw > 0.0 ? rotation_raw - kPi : rotation_raw + kPi};
  RegistrationResult best;
  double best_response = -1.0;
  for (double candidate : candidates) {
    Grid derot = resample_rot_scale(b0, side, -candidate, 1.0 / scale);
    apodize(derot, side, w);
    const PhaseShift shift = correlate_grids(aw, derot, side, OnDegenerate::soft_zero);
    if (shift.response > best_response) {
      best_response = shift.response;
      best.du = shift.du;
      best.dv = shift.dv;
      best.rotation = candidate;
      best.response = std::min(spectral.response, shift.response);
    }
  }
  best.scale = scale;
  if (scale < 0.5 || scale > 2.0) best.response = 0.0;
  return best;
}

}  // namespace panopose
