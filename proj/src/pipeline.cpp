#include "panopose/pipeline.hpp"

#include <chrono>
#include <stdexcept>
#include <vector>

namespace panopose {

EstimateResult estimate_pose(const PanoramaImage& pano_1, const PanoramaImage& pano_2,
                             const EstimateConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  MotionField field = sweep(pano_1, pano_2, config.sweep);
  if (config.median_k >= 3) field = median_filter(field, config.median_k);

  std::vector<FitSample> samples_u, samples_v;
  samples_u.reserve(field.samples.size());
  samples_v.reserve(field.samples.size());
  for (const MotionSample& s : field.samples) {
    samples_u.push_back({s.u_p, s.du});
    samples_v.push_back({s.u_p, s.dv});
  }

  const double omega = pano_1.model.gamma();
  EstimateResult result;
  result.fit_u = fit(samples_u, omega, config.fit);
  result.fit_v = fit(samples_v, omega, config.fit);
  result.pose = extract_pose(result.fit_v, result.fit_u, pano_1.model);
  result.field = std::move(field);

  const auto end = std::chrono::steady_clock::now();
  result.runtime_seconds = std::chrono::duration<double>(end - start).count();
  return result;
}

}  // namespace panopose
