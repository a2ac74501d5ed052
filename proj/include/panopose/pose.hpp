#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "panopose/cylinder.hpp"
#include "panopose/sinusoid.hpp"

namespace panopose {

using RotationMatrix = Eigen::Matrix3d;

/// Relative pose of frame 2 expressed in frame 1 (P1 = R * P2 + t): rotation
/// in full, translation up to the unknown monocular scale.
struct PoseEstimate {
  double roll = 0.0;   // theta_x, radians
  double pitch = 0.0;  // theta_y, radians
  double yaw = 0.0;    // theta_z, radians
  double tz_scaled = 0.0;       // lambda * t_z, pixels
  double txy_angle = 0.0;       // direction of in-plane translation from x-axis, [-pi, pi)
  double txy_mag_scaled = 0.0;  // lambda * |t_xy|, pixels
  bool scale_resolved = false;  // always false: monocular scale is unknown
  std::vector<std::string> warnings;
};

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

/// Map the two fitted sinusoids to a pose. Frozen phase conventions, fixed by
/// matching the exact-geometry oracle on the four cardinal motions:
///   dv(u) = tz_scaled + theta_xy * r * sin(gamma*u - alpha), alpha = -phi_v
///   du(u) = -r*yaw    + txy_mag  *     sin(gamma*u - beta),  beta  = -phi_u
/// so roll = theta_xy cos(alpha), pitch = theta_xy sin(alpha), yaw = -B_u * gamma,
/// tz_scaled = B_v, txy_mag_scaled = A_u, txy_angle = beta.
PoseEstimate extract_pose(const SinusoidParams& phi_v, const SinusoidParams& phi_u,
                          const CylinderModel& model);

/// Convergence-checked wrapper: throws if either fit did not converge. A
/// theta_xy above 0.3 rad attaches an "outside small-angle validity" warning.
PoseEstimate extract_pose(const FitReport& fit_v, const FitReport& fit_u,
                          const CylinderModel& model);

/// R = Rz(yaw) * Ry(pitch) * Rx(roll).
RotationMatrix to_rotation_matrix(const PoseEstimate& pose);

/// z-y-x Euler extraction, inverse of the composition above.
EulerAngles euler_zyx(const RotationMatrix& rotation);

/// Per-axis root-mean-square rotation error. Series must be equal length >= 1.
EulerAngles rmse(std::span<const PoseEstimate> estimates, std::span<const EulerAngles> truth);

double wrap_angle(double radians);  // wrap to [-pi, pi)

}  // namespace panopose
