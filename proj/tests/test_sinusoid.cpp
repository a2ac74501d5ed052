#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "panopose/sinusoid.hpp"

using namespace panopose;
using test_util::model_samples;

namespace {
const double kGamma = 2.0 * std::numbers::pi / 1100.0;

double median_of(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}
}  // namespace

TEST_CASE("model_eval basics") {
  CHECK(model_eval({0.0, 0.0, 1.5}, kGamma, 123.0) == doctest::Approx(1.5));
  CHECK(model_eval({2.0, 0.0, 0.0}, kGamma, 1100.0 / 4.0) == doctest::Approx(2.0));
  CHECK(model_eval({2.0, std::numbers::pi, 0.0}, kGamma, 1100.0 / 4.0) == doctest::Approx(-2.0));
}

TEST_CASE("pseudo huber values") {
  CHECK(pseudo_huber(0.0, 2.0) == doctest::Approx(0.0));
  CHECK(pseudo_huber(2.0, 2.0) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK(pseudo_huber(2.0, 2.0) == doctest::Approx(0.8284271247461903).epsilon(1e-12));
  // linear asymptote with unit slope, independent of sign
  for (double c : {1e6, -1e6})
    CHECK(pseudo_huber(c, 2.0) / std::abs(c) == doctest::Approx(1.0).epsilon(1e-5));
  // the textbook print carries the extra delta factor
  CHECK(pseudo_huber(2.0, 2.0, HuberForm::textbook) ==
        doctest::Approx(4.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK_THROWS(pseudo_huber(1.0, 0.0));
}

TEST_CASE("residual vector") {
  const SinusoidParams truth{5.0, 0.3, 1.2};
  const auto samples = model_samples(truth, kGamma, 20);
  for (double r : residuals(truth, kGamma, samples)) CHECK(std::abs(r) < 1e-12);

  std::vector<FitSample> constant(10);
  for (int i = 0; i < 10; ++i) constant[i] = {i * 10.0, 4.0};
  for (double r : residuals({0.0, 0.0, 0.0}, kGamma, constant))
    CHECK(r == doctest::Approx(-4.0));

  auto spiked = samples;
  spiked[7].y += 10.0;
  const auto res = residuals(truth, kGamma, spiked);
  int nonzero = 0;
  for (double r : res)
    if (std::abs(r) > 1e-9) ++nonzero;
  CHECK(nonzero == 1);
  CHECK(res[7] == doctest::Approx(-10.0));

  CHECK_THROWS(residuals(truth, kGamma, std::vector<FitSample>{}));
}

TEST_CASE("noise-free fit recovers the generator exactly") {
  const SinusoidParams truth{5.0, 0.3, 1.2};
  const auto samples = model_samples(truth, kGamma, 50);
  const FitReport report = fit(samples, kGamma, FitConfig{});
  CHECK(report.converged);
  CHECK(std::abs(report.params.amplitude - truth.amplitude) < 1e-6);
  CHECK(std::abs(report.params.phase - truth.phase) < 1e-6);
  CHECK(std::abs(report.params.offset - truth.offset) < 1e-6);
  CHECK(report.inlier_rmse < 1e-6);
}

TEST_CASE("fit under gaussian noise") {
  const SinusoidParams truth{5.0, 0.3, 1.2};
  std::mt19937 rng(99);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> amp_err, phase_err, offset_err;
  for (int seed = 0; seed < 50; ++seed) {
    auto samples = model_samples(truth, kGamma, 50);
    for (auto& s : samples) s.y += noise(rng);
    const FitReport report = fit(samples, kGamma, FitConfig{});
    REQUIRE(report.converged);
    amp_err.push_back(std::abs(report.params.amplitude - truth.amplitude));
    phase_err.push_back(std::abs(report.params.phase - truth.phase));
    offset_err.push_back(std::abs(report.params.offset - truth.offset));
  }
  CHECK(median_of(amp_err) < 0.15);
  CHECK(median_of(offset_err) < 0.15);
  CHECK(median_of(phase_err) < 0.05);
}

TEST_CASE("robust fit shrugs off gross outliers where plain L2 cannot") {
  const SinusoidParams truth{5.0, 0.3, 1.2};
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::uniform_int_distribution<int> pick(0, 49);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> robust_err, robust_phase_err, l2_err;
  for (int seed = 0; seed < 50; ++seed) {
    auto samples = model_samples(truth, kGamma, 50);
    for (auto& s : samples) s.y += noise(rng);
    // 20% gross outliers at +-30 px
    std::vector<int> hit;
    while (hit.size() < 10) {
      const int i = pick(rng);
      if (std::find(hit.begin(), hit.end(), i) == hit.end()) hit.push_back(i);
    }
    for (int i : hit) samples[i].y = sign(rng) ? 30.0 : -30.0;

    const FitReport robust = fit(samples, kGamma, FitConfig{});
    REQUIRE(robust.converged);
    robust_err.push_back(std::max(std::abs(robust.params.amplitude - truth.amplitude),
                                  std::abs(robust.params.offset - truth.offset)));
    robust_phase_err.push_back(std::abs(robust.params.phase - truth.phase));

    const SinusoidParams l2 =
        test_util::l2_reference_fit(samples, kGamma, SinusoidParams{1.0, 0.0, 0.0});
    l2_err.push_back(std::max(std::abs(l2.amplitude - truth.amplitude),
                              std::abs(l2.offset - truth.offset)));
  }
  // medians over seeds: robust stays tight while plain L2 blows past 1 px
  CHECK(median_of(robust_err) < 0.3);
  CHECK(median_of(robust_phase_err) < 0.1);
  CHECK(median_of(l2_err) > 1.0);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> amp(0.1, 10.0);
  std::uniform_real_distribution<double> ph(-3.0, 3.0);
  std::uniform_real_distribution<double> off(-5.0, 5.0);
  std::uniform_real_distribution<double> ydist(-10.0, 10.0);
  const FitConfig config;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FitSample> samples(20);
    for (int i = 0; i < 20; ++i) samples[i] = {55.0 + i * 40.0, ydist(rng)};
    const SinusoidParams p{amp(rng), ph(rng), off(rng)};
    const Eigen::Vector3d analytic = robust_cost_gradient(p, kGamma, samples, config);
    const double h = 1e-6;
    Eigen::Vector3d numeric;
    for (int axis = 0; axis < 3; ++axis) {
      SinusoidParams lo = p, hi = p;
      double* lo_field = axis == 0 ? &lo.amplitude : axis == 1 ? &lo.phase : &lo.offset;
      double* hi_field = axis == 0 ? &hi.amplitude : axis == 1 ? &hi.phase : &hi.offset;
      *lo_field -= h;
      *hi_field += h;
      numeric[axis] =
          (robust_cost(hi, kGamma, samples, config) - robust_cost(lo, kGamma, samples, config)) /
          (2.0 * h);
    }
    CHECK((analytic - numeric).norm() <= 1e-4 * std::max(1e-8, numeric.norm()));
  }
}

TEST_CASE("cost trace is non-increasing and amplitude canonical") {
  const SinusoidParams truth{4.0, -2.5, 0.4};
  std::mt19937 rng(31);
  std::normal_distribution<double> noise(0.0, 0.5);
  auto samples = model_samples(truth, kGamma, 40);
  for (auto& s : samples) s.y += noise(rng);
  const FitReport report = fit(samples, kGamma, FitConfig{});
  REQUIRE(report.cost_trace.size() >= 2);
  for (std::size_t i = 1; i < report.cost_trace.size(); ++i)
    CHECK(report.cost_trace[i] <= report.cost_trace[i - 1] + 1e-12);
  CHECK(report.params.amplitude >= 0.0);
  CHECK(report.params.phase >= -std::numbers::pi);
  CHECK(report.params.phase < std::numbers::pi);
}

TEST_CASE("sign-flipped parameterization evaluates identically") {
  const SinusoidParams a{3.0, 0.7, -1.0};
  const SinusoidParams b{-3.0, 0.7 + std::numbers::pi, -1.0};
  for (double u = 0.0; u < 1100.0; u += 37.0)
    CHECK(model_eval(a, kGamma, u) == doctest::Approx(model_eval(b, kGamma, u)).epsilon(1e-12));
}

TEST_CASE("fit is a fixed point on its own output") {
  const SinusoidParams truth{6.0, 1.1, -2.0};
  std::mt19937 rng(13);
  std::normal_distribution<double> noise(0.0, 0.4);
  auto samples = model_samples(truth, kGamma, 50);
  for (auto& s : samples) s.y += noise(rng);
  const FitReport first = fit(samples, kGamma, FitConfig{});
  const auto regenerated = model_samples(first.params, kGamma, 50);
  const FitReport second = fit(regenerated, kGamma, FitConfig{});
  CHECK(std::abs(second.params.amplitude - first.params.amplitude) < 1e-6);
  CHECK(std::abs(second.params.phase - first.params.phase) < 1e-6);
  CHECK(std::abs(second.params.offset - first.params.offset) < 1e-6);
}

TEST_CASE("near-zero amplitude degenerates to canonical phase") {
  std::vector<FitSample> flat(20);
  for (int i = 0; i < 20; ++i) flat[i] = {55.0 + i * 40.0, 2.5};
  const FitReport report = fit(flat, kGamma, FitConfig{});
  CHECK(report.amplitude_degenerate);
  CHECK(report.params.phase == 0.0);
  CHECK(report.params.offset == doctest::Approx(2.5));
}

TEST_CASE("fit input validation") {
  const SinusoidParams truth{1.0, 0.0, 0.0};
  CHECK_THROWS(fit(model_samples(truth, kGamma, 5), kGamma, FitConfig{}));  // too few

  // 10 samples crammed into a quarter period
  std::vector<FitSample> narrow(10);
  for (int i = 0; i < 10; ++i) narrow[i] = {i * 25.0, 1.0};
  CHECK_THROWS(fit(narrow, kGamma, FitConfig{}));

  auto bad = model_samples(truth, kGamma, 20);
  bad[3].y = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(fit(bad, kGamma, FitConfig{}));
}
