#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "panopose/pipeline.hpp"
#include "panopose/pose.hpp"
#include "panopose/synth.hpp"

using namespace panopose;

namespace {

const CylinderModel kModel{1100, 110, 1.0};

/// Exact shift field from the closed-form oracle, fitted on both axes.
std::pair<FitReport, FitReport> fit_predicted(const RigidTransform& transform,
                                              const SceneDepth& depth) {
  std::vector<FitSample> samples_u, samples_v;
  for (int k = 0; k < 50; ++k) {
    const double u_p = 55.0 + 20.0 * k;
    const Shift s = predicted_shift(transform, u_p, depth, kModel);
    samples_u.push_back({u_p, s.du});
    samples_v.push_back({u_p, s.dv});
  }
  const double omega = kModel.gamma();
  return {fit(samples_v, omega, FitConfig{}), fit(samples_u, omega, FitConfig{})};
}

PoseEstimate oracle_pose(const RigidTransform& transform, const SceneDepth& depth) {
  const auto [fit_v, fit_u] = fit_predicted(transform, depth);
  return extract_pose(fit_v, fit_u, kModel);
}

}  // namespace

TEST_CASE("zero sinusoids give the identity pose") {
  const PoseEstimate pose = extract_pose(SinusoidParams{}, SinusoidParams{}, kModel);
  CHECK(pose.roll == 0.0);
  CHECK(pose.pitch == 0.0);
  CHECK(pose.yaw == 0.0);
  CHECK(pose.tz_scaled == 0.0);
  CHECK(pose.txy_angle == 0.0);
  CHECK(pose.txy_mag_scaled == 0.0);
  CHECK_FALSE(pose.scale_resolved);
  CHECK(pose.warnings.empty());
}

TEST_CASE("yaw is linear in the fitted du offset") {
  for (double c : {-20.0, -1.0, 0.0, 0.5, 3.0, 40.0}) {
    SinusoidParams phi_u;
    phi_u.offset = c;
    const PoseEstimate pose = extract_pose(SinusoidParams{}, phi_u, kModel);
    CHECK(pose.yaw == doctest::Approx(-c * kModel.gamma()).epsilon(1e-12));
  }
}

TEST_CASE("pure roll from the exact oracle field") {
  const double theta = 0.05;
  const auto depth = SceneDepth::default_for(kModel);
  const auto [fit_v, fit_u] = fit_predicted(RigidTransform::rotation_about({1, 0, 0}, theta), depth);
  // amplitude theta*r, maxima at the y-axis columns
  CHECK(fit_v.params.amplitude ==
        doctest::Approx(theta * kModel.radius()).epsilon(0.01));
  const double u_max_col =
      (std::numbers::pi / 2.0 - fit_v.params.phase) / kModel.gamma();
  CHECK(std::abs(u_max_col - 1100.0 / 4.0) < 3.0);

  const PoseEstimate pose = extract_pose(fit_v, fit_u, kModel);
  CHECK(std::abs(pose.roll - theta) < 0.002);
  CHECK(std::abs(pose.pitch) < 0.002);
  CHECK(std::abs(pose.yaw) < 0.002);
  CHECK(std::abs(pose.tz_scaled) < 0.1);
  CHECK(std::abs(pose.txy_mag_scaled) < 0.1);
}

TEST_CASE("one-column yaw equals one pixel angle") {
  // du identically -1 px, as a 1-column circular shift produces
  std::vector<FitSample> samples_u, samples_v;
  for (int k = 0; k < 50; ++k) {
    samples_u.push_back({55.0 + 20.0 * k, -1.0});
    samples_v.push_back({55.0 + 20.0 * k, 0.0});
  }
  const auto fit_u = fit(samples_u, kModel.gamma(), FitConfig{});
  const auto fit_v = fit(samples_v, kModel.gamma(), FitConfig{});
  const PoseEstimate pose = extract_pose(fit_v, fit_u, kModel);
  CHECK(pose.yaw == doctest::Approx(kModel.gamma()).epsilon(1e-9));
}

TEST_CASE("round trip recovers each single-axis motion") {
  const auto depth = SceneDepth::default_for(kModel);
  const double r = kModel.radius();

  for (double magnitude : {0.02, 0.05, 0.1}) {
    // rotations about x, y, z
    for (int axis = 0; axis < 3; ++axis) {
      Eigen::Vector3d dir = Eigen::Vector3d::Zero();
      dir[axis] = 1.0;
      const PoseEstimate pose = oracle_pose(RigidTransform::rotation_about(dir, magnitude), depth);
      const double recovered = axis == 0 ? pose.roll : axis == 1 ? pose.pitch : pose.yaw;
      CHECK(std::abs(recovered - magnitude) / magnitude < 0.01);
      for (int other = 0; other < 3; ++other) {
        if (other == axis) continue;
        const double leak = other == 0 ? pose.roll : other == 1 ? pose.pitch : pose.yaw;
        CHECK(std::abs(leak) < 0.002);
      }
      CHECK(std::abs(pose.tz_scaled) < 0.1);
      CHECK(std::abs(pose.txy_mag_scaled) < 0.1);
    }
  }

  // translations along x, y, z at 0.02 r
  for (int axis = 0; axis < 3; ++axis) {
    RigidTransform t;
    t.translation[axis] = 0.02 * r;
    const PoseEstimate pose = oracle_pose(t, depth);
    const double lambda = r / depth.at(0.0);
    if (axis == 2) {
      CHECK(std::abs(pose.tz_scaled - lambda * 0.02 * r) / (lambda * 0.02 * r) < 0.01);
      CHECK(std::abs(pose.txy_mag_scaled) < 0.1);
    } else {
      CHECK(std::abs(pose.txy_mag_scaled - lambda * 0.02 * r) / (lambda * 0.02 * r) < 0.01);
      const double expected_angle = axis == 0 ? 0.0 : std::numbers::pi / 2.0;
      CHECK(std::abs(pose.txy_angle - expected_angle) < 0.01);
      CHECK(std::abs(pose.tz_scaled) < 0.1);
    }
    CHECK(std::abs(pose.roll) < 0.002);
    CHECK(std::abs(pose.pitch) < 0.002);
    CHECK(std::abs(pose.yaw) < 0.002);
  }
}

TEST_CASE("rotation readout ignores the translation scale") {
  const auto depth = SceneDepth::default_for(kModel);
  RigidTransform motion = RigidTransform::rotation_about({1, 0, 0}, 0.04);
  motion.translation = Eigen::Vector3d(1.5, -2.0, 1.0);
  const PoseEstimate base = oracle_pose(motion, depth);
  for (double s : {0.5, 2.0, 7.0}) {
    RigidTransform scaled = motion;
    scaled.translation *= s;
    const PoseEstimate pose = oracle_pose(scaled, depth);
    CHECK(pose.roll == doctest::Approx(base.roll).epsilon(1e-3));
    CHECK(pose.pitch == doctest::Approx(base.pitch).epsilon(1e-2));
    CHECK(std::abs(pose.yaw - base.yaw) < 1e-4);
  }
}

TEST_CASE("roll moves the v-shift extrema to the y-axis columns, pitch to the x-axis") {
  const auto depth = SceneDepth::default_for(kModel);
  const auto max_abs_dv_column = [&](const RigidTransform& t) {
    double best = -1.0;
    double best_u = 0.0;
    for (double u_p = 0.0; u_p < 1100.0; u_p += 1.0) {
      const double dv = std::abs(predicted_shift(t, u_p, depth, kModel).dv);
      if (dv > best) {
        best = dv;
        best_u = u_p;
      }
    }
    return best_u;
  };
  const double roll_max = max_abs_dv_column(RigidTransform::rotation_about({1, 0, 0}, 0.05));
  CHECK((std::abs(roll_max - 275.0) < 3.0 || std::abs(roll_max - 825.0) < 3.0));
  const double pitch_max = max_abs_dv_column(RigidTransform::rotation_about({0, 1, 0}, 0.05));
  CHECK((pitch_max < 3.0 || std::abs(pitch_max - 550.0) < 3.0 || pitch_max > 1097.0));

  // and the conjugate columns stay still
  const auto roll = RigidTransform::rotation_about({1, 0, 0}, 0.05);
  CHECK(std::abs(predicted_shift(roll, 0.0, depth, kModel).dv) < 1e-9);
  CHECK(std::abs(predicted_shift(roll, 550.0, depth, kModel).dv) < 1e-9);
}

TEST_CASE("non-converged fits are rejected, wide rotations warned") {
  FitReport good;
  good.converged = true;
  FitReport bad;
  bad.converged = false;
  CHECK_THROWS(extract_pose(bad, good, kModel));
  CHECK_THROWS(extract_pose(good, bad, kModel));

  SinusoidParams big_v;
  big_v.amplitude = 0.4 * kModel.radius();  // theta_xy = 0.4 rad
  const PoseEstimate pose = extract_pose(big_v, SinusoidParams{}, kModel);
  REQUIRE(pose.warnings.size() == 1);
  CHECK(pose.warnings[0] == "outside small-angle validity");
}

TEST_CASE("rotation matrix composition") {
  CHECK(to_rotation_matrix(PoseEstimate{}).isApprox(Eigen::Matrix3d::Identity(), 1e-15));

  PoseEstimate roll_only;
  roll_only.roll = 0.05;
  const RotationMatrix r = to_rotation_matrix(roll_only);
  Eigen::Matrix3d expected;
  const double c = std::cos(0.05), s = std::sin(0.05);
  expected << 1, 0, 0, 0, c, -s, 0, s, c;
  CHECK(r.isApprox(expected, 1e-12));

  PoseEstimate inverse;
  inverse.roll = -0.05;
  CHECK((to_rotation_matrix(roll_only) * to_rotation_matrix(inverse))
            .isApprox(Eigen::Matrix3d::Identity(), 1e-12));

  // orthonormality on a composite pose
  PoseEstimate mixed;
  mixed.roll = 0.03;
  mixed.pitch = -0.07;
  mixed.yaw = 0.11;
  const RotationMatrix m = to_rotation_matrix(mixed);
  CHECK((m.transpose() * m).isApprox(Eigen::Matrix3d::Identity(), 1e-12));
  CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));

  const EulerAngles e = euler_zyx(m);
  CHECK(e.roll == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(e.pitch == doctest::Approx(-0.07).epsilon(1e-9));
  CHECK(e.yaw == doctest::Approx(0.11).epsilon(1e-9));
}

TEST_CASE("per-axis rmse") {
  std::vector<PoseEstimate> est(4);
  std::vector<EulerAngles> truth(4);
  CHECK(rmse(est, truth).roll == doctest::Approx(0.0));
  CHECK(rmse(est, truth).pitch == doctest::Approx(0.0));
  CHECK(rmse(est, truth).yaw == doctest::Approx(0.0));

  for (auto& e : est) e.pitch = 0.25;  // constant bias
  CHECK(rmse(est, truth).pitch == doctest::Approx(0.25));

  for (std::size_t i = 0; i < est.size(); ++i) est[i].yaw = (i % 2 == 0) ? 0.1 : -0.1;
  CHECK(rmse(est, truth).yaw == doctest::Approx(0.1));

  truth.pop_back();
  CHECK_THROWS(rmse(est, truth));
  CHECK_THROWS(rmse(std::vector<PoseEstimate>{}, std::vector<EulerAngles>{}));
}
