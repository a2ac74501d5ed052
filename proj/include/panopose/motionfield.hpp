#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "panopose/cylinder.hpp"
#include "panopose/image.hpp"

namespace panopose {

/// One sliding-window measurement, indexed by its window-center column u_p.
struct MotionSample {
  double u_p = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double rotation = 0.0;
  double scale = 1.0;
  double response = 0.0;
};

struct MotionField {
  std::vector<MotionSample> samples;  // strictly increasing u_p
  int window_side = 0;
  int step = 0;
  int source_width = 0;
  int source_height = 0;
};

struct SweepConfig {
  int window_side = 110;  // L; windows are L x L, full height when L == H
  int step = 20;          // d
  bool wrap = false;      // allow windows to cross the column seam
  int row_offset = 0;     // top row of the window band when L < H
  double response_threshold = 0.05;  // samples below are dropped
  int threads = 0;        // 0 = hardware concurrency
};

/// Slide an L x L window in steps of d over both panoramas and register each
/// pair, recording a MotionSample at u_p = L/2 + k*d. Windows run while
/// L + k*d <= W (k*d < W in wrap mode). Failed registrations are omitted;
/// fewer than 8 surviving samples is an error ("insufficient motion data").
MotionField sweep(const PanoramaImage& pano_1, const PanoramaImage& pano_2,
                  const SweepConfig& config);

/// k-point sliding median applied independently to the du and dv series,
/// endpoints by edge replication. k must be odd, >= 3 and <= sample count.
MotionField median_filter(const MotionField& field, int k);

// CSV serialization: header u_p,du,dv,rotation,scale,response with fixed
// 6-fractional-digit values.
void write_motion_csv(const MotionField& field, std::ostream& out);
void write_motion_csv(const MotionField& field, const std::filesystem::path& path);
MotionField read_motion_csv(const std::filesystem::path& path);

}  // namespace panopose
