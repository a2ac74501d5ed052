#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "panopose/cylinder.hpp"
#include "panopose/image.hpp"
#include "panopose/pose.hpp"

namespace panopose {

/// Rigid transform with the same convention as PoseEstimate: P1 = R * P2 + t,
/// translation in cylinder pixel units.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  RigidTransform inverse() const;
  static RigidTransform rotation_about(const Eigen::Vector3d& axis, double angle);
};

/// Radial distance from the cylinder axis at which scene points live when
/// re-projecting translated views. Must exceed the cylinder radius.
struct SceneDepth {
  enum class Mode { constant, per_column };
  Mode mode = Mode::constant;
  double value = 0.0;
  std::vector<double> per_column_values;  // size u_max in per-column mode

  static SceneDepth constant(double depth);
  static SceneDepth per_column(std::vector<double> depths);
  static SceneDepth default_for(const CylinderModel& model);  // 10 * r
  double at(double u_p) const;
  double min_depth() const;
};

/// Deterministic band-limited random texture, cyclic in u. Identical seeds
/// give bit-identical images.
PanoramaImage make_texture(std::uint32_t seed, const CylinderModel& model);

/// Exact synthetic view change: inverse-maps every destination pixel through
/// scene depth, the transform, and the ray-cylinder intersection, sampling the
/// source bilinearly. No small-angle approximation. Pixels whose source ray
/// leaves the panorama (or degenerates onto the z-axis) are filled with the
/// source mean intensity.
PanoramaImage warp(const PanoramaImage& pano, const RigidTransform& transform,
                   const SceneDepth& depth);

struct Shift {
  double du = 0.0;
  double dv = 0.0;
};

/// Closed-form shift of the window-center row at column u_p for a given
/// transform: the un-approximated intersection expressions by default, or the
/// small-angle/first-order forms when use_small_angle_forms is set, so the
/// approximation error itself is measurable.
Shift predicted_shift(const RigidTransform& transform, double u_p, const SceneDepth& depth,
                      const CylinderModel& model, bool use_small_angle_forms = false);

/// Scenario description for synthetic frame-pair generation.
struct Scenario {
  std::uint32_t seed = 1;
  CylinderModel model;
  RigidTransform transform;
  SceneDepth depth;
};

/// Plain-text key=value scenario file: seed, width, height, rot_axis_x/y/z,
/// rot_angle, t_x/y/z, depth (optional, defaults to 10*r).
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace panopose
