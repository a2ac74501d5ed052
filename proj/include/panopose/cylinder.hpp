#pragma once

#include <Eigen/Core>
#include <array>

#include "panopose/image.hpp"

namespace panopose {

/// Calibrated cylinder geometry. The radius is tied to the panorama width so
/// that one full turn of azimuth spans exactly u_max columns: r = u_max / 2pi
/// and gamma = 2pi / u_max = 1/r.
struct CylinderModel {
  int u_max = 1100;   // panorama width in pixels
  int v_max = 110;    // panorama height in pixels (cylinder height H)
  double aspect_ratio = 1.0;  // angle-per-pixel ratio v vs u, calibration input

  double radius() const;  // cylinder radius in pixels
  double gamma() const;   // opening angle of one pixel in radians
  double height() const { return static_cast<double>(v_max); }
};

/// Raw omni image with its annulus geometry (optical center and the inner and
/// outer radii of the mirror ring).
struct OmniImage {
  Image pixels;
  double center_u = 0.0;
  double center_v = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
};

/// Unwrapped cylindrical panorama. Columns are cyclic in azimuth; row 0
/// corresponds to the top of the cylinder (z = H/2).
struct PanoramaImage {
  Image pixels;
  CylinderModel model;
};

/// Map panorama pixel coordinates to the 3D point on the cylinder surface:
/// x = r cos(u/r), y = r sin(u/r), z = aspect * (H/2 - v).
Eigen::Vector3d pano_to_cylinder(double u_p, double v_p, const CylinderModel& model);

/// Project a 3D point onto the cylinder along the ray through the origin and
/// return its panorama coordinates, u in [0, u_max). Points off the cylinder
/// surface are allowed; points on the z-axis are rejected (azimuth undefined).
std::array<double, 2> cylinder_to_pano(const Eigen::Vector3d& point, const CylinderModel& model);

/// Unwrap an omni image into a cylindrical panorama by cartesian-to-polar
/// resampling around the optical center, bilinear. Azimuth 0 (camera x-axis)
/// lands in column 0; row 0 samples the outer annulus radius unless flip_v.
PanoramaImage unwrap(const OmniImage& omni, const CylinderModel& model, bool flip_v = false);

}  // namespace panopose
