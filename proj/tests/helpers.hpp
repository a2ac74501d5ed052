#pragma once

// Shared test utilities and independent oracles. Everything here is kept
// separate from the library implementation paths it is used to check.

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "panopose/cylinder.hpp"
#include "panopose/image.hpp"
#include "panopose/sinusoid.hpp"

namespace test_util {

/// Content moves k columns toward larger u: out(u) = in(u - k).
inline panopose::Image circ_shift_right(const panopose::Image& in, int k) {
  panopose::Image out(in.width, in.height);
  for (int v = 0; v < in.height; ++v)
    for (int u = 0; u < in.width; ++u)
      out.at(u, v) = in.at(((u - k) % in.width + in.width) % in.width, v);
  return out;
}

/// out(u) = in(u + k): equivalent to a +k*gamma yaw of the camera.
inline panopose::Image circ_shift_left(const panopose::Image& in, int k) {
  return circ_shift_right(in, -k);
}

inline panopose::PanoramaImage shifted_pano(const panopose::PanoramaImage& in, int k_left) {
  panopose::PanoramaImage out;
  out.model = in.model;
  out.pixels = circ_shift_left(in.pixels, k_left);
  return out;
}

/// Independent bilinear resampler: content rotated by +angle, magnified by
/// scale, shifted by (du, dv), all about the image center.
inline panopose::Image resample_window(const panopose::Image& in, double angle, double scale,
                                       double du = 0.0, double dv = 0.0) {
  panopose::Image out(in.width, in.height, 0.0f);
  const double cx = (in.width - 1) / 2.0;
  const double cy = (in.height - 1) / 2.0;
  const double ca = std::cos(-angle);
  const double sa = std::sin(-angle);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      const double rx = (x - du - cx) / scale;
      const double ry = (y - dv - cy) / scale;
      const double sx = cx + ca * rx - sa * ry;
      const double sy = cy + sa * rx + ca * ry;
      if (sx < 0 || sy < 0 || sx > in.width - 1 || sy > in.height - 1) continue;
      out.at(x, y) = panopose::sample_bilinear_clamped(in, sx, sy);
    }
  }
  return out;
}

/// Zero-mean window padded into a power-of-two square, mirroring the sweep's
/// preprocessing so single windows can be fed to the registration engine.
inline panopose::Image crop_padded(const panopose::Image& src, int c0, int r0, int side,
                                   int padded_side) {
  double mean = 0.0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) mean += src.at(c0 + x, r0 + y);
  mean /= static_cast<double>(side) * side;
  panopose::Image out(padded_side, padded_side, 0.0f);
  const int off = (padded_side - side) / 2;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      out.at(off + x, off + y) = static_cast<float>(src.at(c0 + x, r0 + y) - mean);
  return out;
}

inline double ncc(const panopose::Image& a, const panopose::Image& b) {
  const double ma = panopose::mean_intensity(a);
  const double mb = panopose::mean_intensity(b);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double da = a.data[i] - ma;
    const double db = b.data[i] - mb;
    num += da * db;
    va += da * da;
    vb += db * db;
  }
  return num / std::sqrt(va * vb);
}

/// Plain least-squares reference fit (Gauss-Newton with step halving),
/// independent of the library's robust LM path.
inline panopose::SinusoidParams l2_reference_fit(const std::vector<panopose::FitSample>& samples,
                                                 double omega,
                                                 const panopose::SinusoidParams& start) {
  Eigen::Vector3d p(start.amplitude, start.phase, start.offset);
  const auto sse = [&](const Eigen::Vector3d& q) {
    double total = 0.0;
    for (const auto& s : samples) {
      const double r = q[2] + q[0] * std::sin(omega * s.u + q[1]) - s.y;
      total += r * r;
    }
    return total;
  };
  double cost = sse(p);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (const auto& s : samples) {
      const double arg = omega * s.u + p[1];
      const double r = p[2] + p[0] * std::sin(arg) - s.y;
      const Eigen::Vector3d j(std::sin(arg), p[0] * std::cos(arg), 1.0);
      jtj += j * j.transpose();
      jtr += j * r;
    }
    jtj += 1e-9 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d step = jtj.ldlt().solve(-jtr);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 20; ++halving) {
      const Eigen::Vector3d q = p + alpha * step;
      const double c = sse(q);
      if (c < cost) {
        p = q;
        cost = c;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  panopose::SinusoidParams out{p[0], p[1], p[2]};
  if (out.amplitude < 0.0) {
    out.amplitude = -out.amplitude;
    out.phase += std::numbers::pi;
  }
  out.phase = std::remainder(out.phase, 2.0 * std::numbers::pi);
  return out;
}

/// Samples generated exactly from a sinusoid at the sweep's column layout.
inline std::vector<panopose::FitSample> model_samples(const panopose::SinusoidParams& params,
                                                      double omega, int count, double u0 = 55.0,
                                                      double step = 20.0) {
  std::vector<panopose::FitSample> s(count);
  for (int i = 0; i < count; ++i) {
    const double u = u0 + i * step;
    s[i] = {u, panopose::model_eval(params, omega, u)};
  }
  return s;
}

inline double spearman_rank_correlation(std::vector<double> x, std::vector<double> y) {
  const auto ranks = [](std::vector<double>& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n - 1) / 2.0;
  double num = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mean) * (ry[i] - mean);
    vx += (rx[i] - mean) * (rx[i] - mean);
    vy += (ry[i] - mean) * (ry[i] - mean);
  }
  return num / std::sqrt(vx * vy);
}

}  // namespace test_util
