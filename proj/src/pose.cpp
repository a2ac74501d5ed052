#include "panopose/pose.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace panopose {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSmallAngleLimit = 0.3;  // rad, model validity gate
}

double wrap_angle(double radians) {
  double y = std::fmod(radians + kPi, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y - kPi;
}

PoseEstimate extract_pose(const SinusoidParams& phi_v, const SinusoidParams& phi_u,
                          const CylinderModel& model) {
  const double gamma = model.gamma();
  PoseEstimate pose;

  const double theta_xy = phi_v.amplitude * gamma;
  const double alpha = wrap_angle(-phi_v.phase);
  pose.roll = theta_xy * std::cos(alpha);
  pose.pitch = theta_xy * std::sin(alpha);
  pose.yaw = -phi_u.offset * gamma;
  pose.tz_scaled = phi_v.offset;
  pose.txy_mag_scaled = phi_u.amplitude;
  pose.txy_angle = phi_u.amplitude > 0.0 ? wrap_angle(-phi_u.phase) : 0.0;

  if (theta_xy > kSmallAngleLimit) pose.warnings.emplace_back("outside small-angle validity");
  return pose;
}

PoseEstimate extract_pose(const FitReport& fit_v, const FitReport& fit_u,
                          const CylinderModel& model) {
  if (!fit_v.converged || !fit_u.converged)
    throw std::runtime_error("fit did not converge");
  return extract_pose(fit_v.params, fit_u.params, model);
}

RotationMatrix to_rotation_matrix(const PoseEstimate& pose) {
  return (Eigen::AngleAxisd(pose.yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pose.pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(pose.roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

EulerAngles euler_zyx(const RotationMatrix& rotation) {
  EulerAngles e;
  e.pitch = std::asin(std::clamp(-rotation(2, 0), -1.0, 1.0));
  e.roll = std::atan2(rotation(2, 1), rotation(2, 2));
  e.yaw = std::atan2(rotation(1, 0), rotation(0, 0));
  return e;
}

EulerAngles rmse(std::span<const PoseEstimate> estimates, std::span<const EulerAngles> truth) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("series length mismatch");
  if (estimates.empty()) throw std::invalid_argument("empty series");
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double ex = estimates[i].roll - truth[i].roll;
    const double ey = estimates[i].pitch - truth[i].pitch;
    const double ez = estimates[i].yaw - truth[i].yaw;
    sx += ex * ex;
    sy += ey * ey;
    sz += ez * ez;
  }
  const double n = static_cast<double>(estimates.size());
  return {std::sqrt(sx / n), std::sqrt(sy / n), std::sqrt(sz / n)};
}

}  // namespace panopose
