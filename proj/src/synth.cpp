#include "panopose/synth.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "panopose/config.hpp"

namespace panopose {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(rotation.transpose() * translation);
  return inv;
}

RigidTransform RigidTransform::rotation_about(const Eigen::Vector3d& axis, double angle) {
  if (axis.norm() < 1e-12 && angle != 0.0)
    throw std::invalid_argument("rotation axis must be non-zero");
  RigidTransform t;
  if (angle != 0.0)
    t.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return t;
}

SceneDepth SceneDepth::constant(double depth) {
  SceneDepth d;
  d.mode = Mode::constant;
  d.value = depth;
  return d;
}

SceneDepth SceneDepth::per_column(std::vector<double> depths) {
  if (depths.empty()) throw std::invalid_argument("per-column depth needs values");
  SceneDepth d;
  d.mode = Mode::per_column;
  d.per_column_values = std::move(depths);
  return d;
}

SceneDepth SceneDepth::default_for(const CylinderModel& model) {
  return constant(10.0 * model.radius());
}

double SceneDepth::at(double u_p) const {
  if (mode == Mode::constant) return value;
  const int n = static_cast<int>(per_column_values.size());
  int idx = static_cast<int>(std::lround(u_p)) % n;
  if (idx < 0) idx += n;
  return per_column_values[static_cast<std::size_t>(idx)];
}

double SceneDepth::min_depth() const {
  if (mode == Mode::constant) return value;
  return *std::min_element(per_column_values.begin(), per_column_values.end());
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable blur, cyclic along both axes.
void blur_cyclic(std::vector<double>& img, int width, int height, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size()) / 2;
  std::vector<double> tmp(img.size());
  for (int v = 0; v < height; ++v) {
    const double* row = img.data() + static_cast<std::size_t>(v) * width;
    double* out = tmp.data() + static_cast<std::size_t>(v) * width;
    for (int u = 0; u < width; ++u) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * row[(u + i + width) % width];
      out[u] = acc;
    }
  }
  for (int u = 0; u < width; ++u) {
    for (int v = 0; v < height; ++v) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>((v + i + height) % height) * width + u];
      img[static_cast<std::size_t>(v) * width + u] = acc;
    }
  }
}

}  // namespace

PanoramaImage make_texture(std::uint32_t seed, const CylinderModel& model) {
  const int width = model.u_max;
  const int height = model.v_max;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);

  // Band-passed white noise: dense spectrum (a sparse harmonic comb would be
  // quasi-periodic and alias the correlator), cyclic wrap on both axes.
  std::vector<double> field(static_cast<std::size_t>(width) * height);
  for (double& v : field) v = noise(rng);
  blur_cyclic(field, width, height, 0.8);
  std::vector<double> low = field;
  blur_cyclic(low, width, height, 6.0);
  for (std::size_t i = 0; i < field.size(); ++i) field[i] -= low[i];

  double mean = 0.0;
  for (double v : field) mean += v;
  mean /= static_cast<double>(field.size());
  double var = 0.0;
  for (double v : field) var += (v - mean) * (v - mean);
  var /= static_cast<double>(field.size());
  const double scale = var > 0.0 ? 40.0 / std::sqrt(var) : 0.0;

  PanoramaImage pano;
  pano.model = model;
  pano.pixels = Image(width, height);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = 128.0 + scale * (field[i] - mean);
    pano.pixels.data[i] = static_cast<float>(std::clamp(v, 0.0, 255.0));
  }
  return pano;
}

PanoramaImage warp(const PanoramaImage& pano, const RigidTransform& transform,
                   const SceneDepth& depth) {
  const CylinderModel& model = pano.model;
  const double r = model.radius();
  if (!(depth.min_depth() > r))
    throw std::invalid_argument("scene depth must exceed the cylinder radius");
  if (pano.pixels.width != model.u_max || pano.pixels.height != model.v_max)
    throw std::invalid_argument("panorama does not match its model");

  const float fill = static_cast<float>(mean_intensity(pano.pixels));
  PanoramaImage out;
  out.model = model;
  out.pixels = Image(model.u_max, model.v_max, fill);

  for (int v = 0; v < model.v_max; ++v) {
    for (int u = 0; u < model.u_max; ++u) {
      // Destination pixel -> scene point at the configured radial depth.
      const Eigen::Vector3d on_cylinder = pano_to_cylinder(u, v, model);
      const Eigen::Vector3d scene = on_cylinder * (depth.at(u) / r);
      const Eigen::Vector3d in_source = transform.rotation * scene + transform.translation;
      const double rho = std::hypot(in_source.x(), in_source.y());
      if (rho < 1e-9) continue;  // ray parallel to the axis: keep fill value
      const auto [su, sv] = cylinder_to_pano(in_source, model);
      if (sv < -1e-9 || sv > model.v_max - 1 + 1e-9) continue;  // leaves the panorama
      out.pixels.at(u, v) = sample_bilinear_uwrap(pano.pixels, su, sv);
    }
  }
  return out;
}

Shift predicted_shift(const RigidTransform& transform, double u_p, const SceneDepth& depth,
                      const CylinderModel& model, bool use_small_angle_forms) {
  const double r = model.radius();
  const double gamma = model.gamma();
  const double width = static_cast<double>(model.u_max);
  const double scene_depth = depth.at(u_p);
  if (!(scene_depth > r))
    throw std::invalid_argument("scene depth must exceed the cylinder radius");
  const double lambda = r / scene_depth;

  if (use_small_angle_forms) {
    // The compact sinusoid model: rotation from the log map, translation from
    // the first-order expansion of the re-projection.
    const Eigen::AngleAxisd aa(transform.rotation);
    const Eigen::Vector3d omega = aa.angle() * aa.axis();
    const double theta_xy = std::hypot(omega.x(), omega.y());
    const double alpha = theta_xy > 0.0 ? std::atan2(omega.y(), omega.x()) : 0.0;
    const double txy = std::hypot(transform.translation.x(), transform.translation.y());
    const double beta =
        txy > 0.0 ? std::atan2(transform.translation.y(), transform.translation.x()) : 0.0;
    Shift s;
    s.dv = lambda * transform.translation.z() + theta_xy * r * std::sin(gamma * u_p - alpha);
    s.du = -r * omega.z() + lambda * txy * std::sin(gamma * u_p - beta);
    return s;
  }

  // Exact path: scene point of the window-center row, transformed and
  // re-intersected with the cylinder.
  const double theta = gamma * u_p;
  const Eigen::Vector3d scene(scene_depth * std::cos(theta), scene_depth * std::sin(theta), 0.0);
  const Eigen::Vector3d moved = transform.rotation * scene + transform.translation;
  const double rho = std::hypot(moved.x(), moved.y());
  if (rho < 1e-12)
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double u_source = r * std::atan2(moved.y(), moved.x());
  double du = u_p - u_source;
  du = std::remainder(du, width);
  const double z_on_cylinder = moved.z() * r / rho;
  Shift s;
  s.du = du;
  s.dv = z_on_cylinder / model.aspect_ratio;
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  Scenario sc;
  sc.seed = static_cast<std::uint32_t>(kv.get_int_or("seed", 1));
  sc.model.u_max = kv.get_int_or("width", 1100);
  sc.model.v_max = kv.get_int_or("height", 110);
  sc.model.aspect_ratio = kv.get_double_or("aspect_ratio", 1.0);
  if (sc.model.u_max <= 0 || sc.model.v_max <= 0)
    throw std::runtime_error("scenario dimensions must be positive");

  const double angle = kv.get_double_or("rot_angle", 0.0);
  const bool has_axis =
      kv.has("rot_axis_x") || kv.has("rot_axis_y") || kv.has("rot_axis_z");
  const Eigen::Vector3d axis =
      has_axis ? Eigen::Vector3d(kv.get_double_or("rot_axis_x", 0.0),
                                 kv.get_double_or("rot_axis_y", 0.0),
                                 kv.get_double_or("rot_axis_z", 0.0))
               : Eigen::Vector3d::UnitZ();
  sc.transform = RigidTransform::rotation_about(axis, angle);
  sc.transform.translation = Eigen::Vector3d(
      kv.get_double_or("t_x", 0.0), kv.get_double_or("t_y", 0.0), kv.get_double_or("t_z", 0.0));
  sc.depth = SceneDepth::constant(kv.get_double_or("depth", 10.0 * sc.model.radius()));
  if (!(sc.depth.min_depth() > sc.model.radius()))
    throw std::runtime_error("scenario depth must exceed the cylinder radius");
  return sc;
}

}  // namespace panopose
