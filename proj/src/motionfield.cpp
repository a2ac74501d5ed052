#include "panopose/motionfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fft.hpp"
#include "panopose/fmi.hpp"

namespace panopose {

namespace {

/// Extract the L x L window whose left edge is at column c0, subtract its
/// mean and center it inside a zero square of power-of-two side.
Image padded_window(const Image& src, int c0, int r0, int side, bool wrap) {
  const int padded = detail::next_pow2(side);
  const int offset = (padded - side) / 2;
  double mean = 0.0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      mean += src.at(wrap ? (c0 + x) % src.width : c0 + x, r0 + y);
  mean /= static_cast<double>(side) * side;
  Image out(padded, padded, 0.0f);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      out.at(offset + x, offset + y) = static_cast<float>(
          src.at(wrap ? (c0 + x) % src.width : c0 + x, r0 + y) - mean);
  return out;
}

}  // namespace

MotionField sweep(const PanoramaImage& pano_1, const PanoramaImage& pano_2,
                  const SweepConfig& config) {
  const Image& img_1 = pano_1.pixels;
  const Image& img_2 = pano_2.pixels;
  if (img_1.width != img_2.width || img_1.height != img_2.height)
    throw std::invalid_argument("panorama dimensions mismatch");
  const int width = img_1.width;
  const int height = img_1.height;
  const int side = config.window_side;
  const int step = config.step;
  if (side <= 0 || side > height) throw std::invalid_argument("window side must be in [1, H]");
  if (step < 1) throw std::invalid_argument("step must be >= 1");
  if (config.row_offset < 0 || config.row_offset + side > height)
    throw std::invalid_argument("window rows out of range");

  std::vector<int> starts;
  for (int k = 0;; ++k) {
    const int c0 = k * step;
    if (config.wrap ? c0 >= width : side + c0 > width) break;
    starts.push_back(c0);
  }

  std::vector<std::optional<MotionSample>> slots(starts.size());
  const auto run = [&](std::size_t index) {
    const int c0 = starts[index];
    const Image win_1 = padded_window(img_1, c0, config.row_offset, side, config.wrap);
    const Image win_2 = padded_window(img_2, c0, config.row_offset, side, config.wrap);
    try {
      const RegistrationResult reg = register_window(win_1, win_2);
      if (!(std::isfinite(reg.du) && std::isfinite(reg.dv) && std::isfinite(reg.rotation) &&
            std::isfinite(reg.scale) && std::isfinite(reg.response)))
        return;
      if (reg.response < config.response_threshold) return;
      MotionSample sample;
      sample.u_p = side / 2.0 + static_cast<double>(c0);
      sample.du = reg.du;
      sample.dv = reg.dv;
      sample.rotation = reg.rotation;
      sample.scale = reg.scale;
      sample.response = reg.response;
      slots[index] = sample;
    } catch (const std::exception&) {
      // failed registration: sample omitted
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(slots.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < slots.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < slots.size(); i += threads) run(i);
      });
    for (auto& th : pool) th.join();
  }

  MotionField field;
  field.window_side = side;
  field.step = step;
  field.source_width = width;
  field.source_height = height;
  for (const auto& slot : slots)
    if (slot) field.samples.push_back(*slot);
  if (field.samples.size() < 8) throw std::runtime_error("insufficient motion data");
  return field;
}

MotionField median_filter(const MotionField& field, int k) {
  if (k < 3 || k % 2 == 0) throw std::invalid_argument("median window must be odd and >= 3");
  const int n = static_cast<int>(field.samples.size());
  if (k > n) throw std::invalid_argument("median window exceeds sample count");
  MotionField out = field;
  const int half = k / 2;
  std::vector<double> window(k);
  const auto filter_series = [&](auto read, auto write) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        const int idx = std::clamp(i - half + j, 0, n - 1);  // edge replication
        window[j] = read(field.samples[idx]);
      }
      std::nth_element(window.begin(), window.begin() + half, window.end());
      write(out.samples[i], window[half]);
    }
  };
  filter_series([](const MotionSample& s) { return s.du; },
                [](MotionSample& s, double v) { s.du = v; });
  filter_series([](const MotionSample& s) { return s.dv; },
                [](MotionSample& s, double v) { s.dv = v; });
  return out;
}

namespace {

std::string fixed6(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

void write_motion_csv(const MotionField& field, std::ostream& out) {
  out << "u_p,du,dv,rotation,scale,response\n";
  for (const MotionSample& s : field.samples) {
    out << fixed6(s.u_p) << ',' << fixed6(s.du) << ',' << fixed6(s.dv) << ','
        << fixed6(s.rotation) << ',' << fixed6(s.scale) << ',' << fixed6(s.response) << '\n';
  }
}

void write_motion_csv(const MotionField& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write motion csv: " + path.string());
  write_motion_csv(field, out);
  if (!out) throw std::runtime_error("short write: " + path.string());
}

MotionField read_motion_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open motion csv: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("u_p,", 0) != 0)
    throw std::runtime_error("bad motion csv header: " + path.string());
  MotionField field;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    MotionSample s;
    char comma = 0;
    if (!(ss >> s.u_p >> comma >> s.du >> comma >> s.dv >> comma >> s.rotation >> comma >>
          s.scale >> comma >> s.response))
      throw std::runtime_error("bad motion csv row: " + line);
    field.samples.push_back(s);
  }
  return field;
}

}  // namespace panopose
