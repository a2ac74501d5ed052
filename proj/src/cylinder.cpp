#include "panopose/cylinder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace panopose {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double CylinderModel::radius() const { return static_cast<double>(u_max) / kTwoPi; }

double CylinderModel::gamma() const { return kTwoPi / static_cast<double>(u_max); }

Eigen::Vector3d pano_to_cylinder(double u_p, double v_p, const CylinderModel& model) {
  const double r = model.radius();
  const double theta = u_p / r;
  const double z = model.aspect_ratio * (model.height() / 2.0 - v_p);
  return {r * std::cos(theta), r * std::sin(theta), z};
}

std::array<double, 2> cylinder_to_pano(const Eigen::Vector3d& point, const CylinderModel& model) {
  const double rho = std::hypot(point.x(), point.y());
  if (rho <= 0.0) throw std::invalid_argument("point on the cylinder axis: azimuth undefined");
  const double r = model.radius();
  double u_p = r * std::atan2(point.y(), point.x());
  u_p = std::fmod(u_p, static_cast<double>(model.u_max));
  if (u_p < 0.0) u_p += static_cast<double>(model.u_max);
  // Central projection onto the cylinder surface removes radial scale.
  const double z_on_cylinder = point.z() * r / rho;
  const double v_p = model.height() / 2.0 - z_on_cylinder / model.aspect_ratio;
  return {u_p, v_p};
}

PanoramaImage unwrap(const OmniImage& omni, const CylinderModel& model, bool flip_v) {
  if (model.u_max <= 0 || model.v_max <= 0)
    throw std::invalid_argument("panorama dimensions must be positive");
  if (omni.pixels.empty()) throw std::invalid_argument("empty omni image");
  if (!(omni.rho_min > 0.0) || !(omni.rho_max > omni.rho_min))
    throw std::invalid_argument("invalid annulus radii");
  // The sampled circle must stay inside the omni image.
  if (omni.center_u - omni.rho_max < 0.0 || omni.center_v - omni.rho_max < 0.0 ||
      omni.center_u + omni.rho_max > omni.pixels.width - 1 ||
      omni.center_v + omni.rho_max > omni.pixels.height - 1)
    throw std::invalid_argument("annulus exceeds omni image bounds");

  PanoramaImage pano;
  pano.model = model;
  pano.pixels = Image(model.u_max, model.v_max);
  const double gamma = model.gamma();
  const double span = omni.rho_max - omni.rho_min;
  for (int v = 0; v < model.v_max; ++v) {
    const double frac = static_cast<double>(v) / static_cast<double>(model.v_max);
    const double radius =
        flip_v ? omni.rho_min + frac * span : omni.rho_max - frac * span;
    for (int u = 0; u < model.u_max; ++u) {
      const double angle = gamma * u;
      const double su = omni.center_u + radius * std::cos(angle);
      const double sv = omni.center_v + radius * std::sin(angle);
      pano.pixels.at(u, v) = sample_bilinear_clamped(omni.pixels, su, sv);
    }
  }
  return pano;
}

}  // namespace panopose
