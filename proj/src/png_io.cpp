#include "sketchgraph/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "sketchgraph/atomic_file.hpp"

namespace sketchgraph {

namespace {

std::uint8_t to_byte(float v) {
  const float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

std::vector<std::uint8_t> read_png(const std::filesystem::path& path, std::uint32_t format, int& w, int& h) {
  require_file(path);
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw Error("cannot read PNG " + path.string() + ": " + img.message);
  img.format = format;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error("cannot decode PNG " + path.string() + ": " + img.message);
  }
  w = static_cast<int>(img.width);
  h = static_cast<int>(img.height);
  return buf;
}

void write_png(const std::filesystem::path& path, std::uint32_t format, int w, int h, const std::vector<std::uint8_t>& buf) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  png_alloc_size_t bytes = 0;
  if (!png_image_write_to_memory(&img, nullptr, &bytes, 0, buf.data(), 0, nullptr))
    throw Error("cannot encode PNG " + path.string() + ": " + img.message);
  std::string encoded(bytes, '\0');
  if (!png_image_write_to_memory(&img, encoded.data(), &bytes, 0, buf.data(), 0, nullptr))
    throw Error("cannot encode PNG " + path.string() + ": " + img.message);
  write_file_atomic(path, encoded);
}

} // namespace

RasterImage load_png_gray(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const auto buf = read_png(path, PNG_FORMAT_GRAY, w, h);
  RasterImage out(w, h);
  for (std::size_t i = 0; i < buf.size(); ++i) out.data()[i] = static_cast<float>(buf[i]) / 255.0f;
  return out;
}

void save_png_gray(const std::filesystem::path& path, const RasterImage& image) {
  std::vector<std::uint8_t> buf(image.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = to_byte(image.data()[i]);
  write_png(path, PNG_FORMAT_GRAY, image.width(), image.height(), buf);
}

std::array<RasterImage, 3> load_png_rgb(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const auto buf = read_png(path, PNG_FORMAT_RGB, w, h);
  std::array<RasterImage, 3> out{RasterImage(w, h), RasterImage(w, h), RasterImage(w, h)};
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) out[c].data()[i] = static_cast<float>(buf[3 * i + c]) / 255.0f;
  return out;
}

void save_png_rgb(const std::filesystem::path& path, const RasterImage& r, const RasterImage& g, const RasterImage& b) {
  if (!r.same_shape(g) || !r.same_shape(b)) throw Error("save_png_rgb: channel dimension mismatch");
  std::vector<std::uint8_t> buf(3 * r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    buf[3 * i + 0] = to_byte(r.data()[i]);
    buf[3 * i + 1] = to_byte(g.data()[i]);
    buf[3 * i + 2] = to_byte(b.data()[i]);
  }
  write_png(path, PNG_FORMAT_RGB, r.width(), r.height(), buf);
}

} // namespace sketchgraph
