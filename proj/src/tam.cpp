#include "sketchgraph/tam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sketchgraph/png_io.hpp"
#include "sketchgraph/simd/kernels.hpp"

namespace sketchgraph::tam {

void validate(const TamSpec& spec) {
  if (spec.breakpoints.size() != spec.textures.size())
    throw Error("tam: breakpoint count differs from texture count");
  if (spec.textures.empty()) throw Error("tam: at least one texture is required");
  for (std::size_t i = 0; i < spec.breakpoints.size(); ++i) {
    const float b = spec.breakpoints[i];
    if (!(b > 0.0f && b <= 1.0f)) throw Error("tam: breakpoints must lie in (0, 1]");
    if (i > 0 && !(spec.breakpoints[i - 1] < b)) throw Error("tam: breakpoints must be strictly ascending");
  }
  for (const RasterImage& t : spec.textures)
    if (t.empty()) throw Error("tam: empty texture");
}

namespace {

int wrap(long v, int n) {
  const long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

} // namespace

RasterImage tam_shade(const RasterImage& illumination, const TamSpec& spec, TileOffset offset) {
  validate(spec);
  const int w = illumination.width();
  const int h = illumination.height();
  const int k = static_cast<int>(spec.textures.size());
  RasterImage out(w, h);

  std::vector<std::vector<float>> tiled(k, std::vector<float>(w));
  std::vector<const float*> rows(k);
  const simd::Kernels& kern = simd::active();
  for (int y = 0; y < h; ++y) {
    for (int i = 0; i < k; ++i) {
      const RasterImage& tex = spec.textures[i];
      const auto src = tex.row(wrap(static_cast<long>(y) + offset.y, tex.height()));
      for (int x = 0; x < w; ++x) tiled[i][x] = src[wrap(static_cast<long>(x) + offset.x, tex.width())];
      rows[i] = tiled[i].data();
    }
    kern.tam_row(illumination.row(y).data(), out.row(y).data(), w, rows.data(), spec.breakpoints.data(), k,
                 spec.black_floor, spec.literal_direction);
  }
  return out;
}

RasterImage hatch_texture(int size, double angle_deg, double spacing, float ink) {
  RasterImage tex(size, size, 1.0f);
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double nx = -std::sin(a), ny = std::cos(a);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d = x * nx + y * ny;
      const double m = d - spacing * std::floor(d / spacing);
      if (m < 1.0) tex.at(x, y) = ink;
    }
  return tex;
}

TamSpec default_spec(int texture_size) {
  TamSpec spec;
  spec.breakpoints = {0.2f, 0.4f, 0.6f, 0.8f};
  // Denser, more varied hatching for darker tones.
  spec.textures = {hatch_texture(texture_size, 90.0, 4.0), hatch_texture(texture_size, 0.0, 4.0),
                   hatch_texture(texture_size, -45.0, 8.0), hatch_texture(texture_size, 45.0, 8.0)};
  spec.black_floor = 0.02f;
  return spec;
}

TamSpec load_spec(const std::filesystem::path& dir, std::vector<float> breakpoints, float black_floor) {
  if (!std::filesystem::is_directory(dir)) throw Error("tam: texture directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  TamSpec spec;
  spec.breakpoints = std::move(breakpoints);
  spec.black_floor = black_floor;
  for (const auto& f : files) spec.textures.push_back(load_png_gray(f));
  validate(spec);
  return spec;
}

} // namespace sketchgraph::tam
