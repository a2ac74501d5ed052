#include "panopose/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace panopose {

double mean_intensity(const Image& img) {
  if (img.data.empty()) return 0.0;
  double sum = 0.0;
  for (float v : img.data) sum += v;
  return sum / static_cast<double>(img.data.size());
}

float sample_bilinear_uwrap(const Image& img, double u, double v) {
  const int w = img.width;
  v = std::clamp(v, 0.0, static_cast<double>(img.height - 1));
  double uf = std::floor(u);
  double vf = std::floor(v);
  double fu = u - uf;
  double fv = v - vf;
  int u0 = static_cast<int>(uf) % w;
  if (u0 < 0) u0 += w;
  int u1 = (u0 + 1) % w;
  int v0 = std::clamp(static_cast<int>(vf), 0, img.height - 1);
  int v1 = std::min(v0 + 1, img.height - 1);
  double top = (1.0 - fu) * img.at(u0, v0) + fu * img.at(u1, v0);
  double bot = (1.0 - fu) * img.at(u0, v1) + fu * img.at(u1, v1);
  return static_cast<float>((1.0 - fv) * top + fv * bot);
}

float sample_bilinear_clamped(const Image& img, double u, double v) {
  double uc = std::clamp(u, 0.0, static_cast<double>(img.width - 1));
  double vc = std::clamp(v, 0.0, static_cast<double>(img.height - 1));
  int u0 = static_cast<int>(std::floor(uc));
  int v0 = static_cast<int>(std::floor(vc));
  int u1 = std::min(u0 + 1, img.width - 1);
  int v1 = std::min(v0 + 1, img.height - 1);
  double fu = uc - u0;
  double fv = vc - v0;
  double top = (1.0 - fu) * img.at(u0, v0) + fu * img.at(u1, v0);
  double bot = (1.0 - fu) * img.at(u0, v1) + fu * img.at(u1, v1);
  return static_cast<float>((1.0 - fv) * top + fv * bot);
}

namespace {

// Skips whitespace and '#' comments between header tokens.
int next_header_int(std::istream& in, const std::filesystem::path& path) {
  while (true) {
    int c = in.peek();
    if (c == EOF) throw std::runtime_error("truncated graymap header: " + path.string());
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("bad graymap header: " + path.string());
  return value;
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path.string());
  char p = 0, kind = 0;
  in.get(p);
  in.get(kind);
  if (p != 'P' || (kind != '2' && kind != '5'))
    throw std::runtime_error("not a portable graymap: " + path.string());
  const int width = next_header_int(in, path);
  const int height = next_header_int(in, path);
  const int maxval = next_header_int(in, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported graymap dimensions: " + path.string());
  Image img(width, height);
  const std::size_t n = img.data.size();
  if (kind == '5') {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw std::runtime_error("truncated graymap data: " + path.string());
    for (std::size_t i = 0; i < n; ++i) img.data[i] = static_cast<float>(raw[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      int value = 0;
      if (!(in >> value)) throw std::runtime_error("truncated graymap data: " + path.string());
      img.data[i] = static_cast<float>(value);
    }
  }
  if (maxval != 255) {
    const float scale = 255.0f / static_cast<float>(maxval);
    for (float& v : img.data) v *= scale;
  }
  return img;
}

void write_pgm(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw std::invalid_argument("refusing to write empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.data.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    float v = std::round(img.data[i]);
    raw[i] = static_cast<unsigned char>(std::clamp(v, 0.0f, 255.0f));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace panopose
