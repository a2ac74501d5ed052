#pragma once

#include "panopose/motionfield.hpp"
#include "panopose/pose.hpp"
#include "panopose/sinusoid.hpp"

namespace panopose {

struct EstimateConfig {
  SweepConfig sweep;
  int median_k = 5;
  FitConfig fit;
};

struct EstimateResult {
  PoseEstimate pose;
  FitReport fit_u;
  FitReport fit_v;
  MotionField field;           // after median filtering
  double runtime_seconds = 0;  // sweep + filter + fit + extraction
};

/// End-to-end estimation between two equal-size panoramas:
/// sweep -> median filter -> sinusoid fit on both axes -> pose extraction.
EstimateResult estimate_pose(const PanoramaImage& pano_1, const PanoramaImage& pano_2,
                             const EstimateConfig& config = {});

}  // namespace panopose
