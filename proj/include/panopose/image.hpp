#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace panopose {

// Row-major grayscale image, intensities nominally in [0, 255].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  float& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  float at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
  bool empty() const { return width <= 0 || height <= 0; }
};

double mean_intensity(const Image& img);

/// Bilinear sample with cyclic wrap along u. v must lie in [0, height-1].
float sample_bilinear_uwrap(const Image& img, double u, double v);

/// Bilinear sample with clamping on both axes (no wrap).
float sample_bilinear_clamped(const Image& img, double u, double v);

// Portable graymap I/O. Reading accepts P5 (binary) and P2 (ASCII), maxval <= 255;
// writing emits P5.
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const Image& img, const std::filesystem::path& path);

}  // namespace panopose
