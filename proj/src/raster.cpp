#include "sketchgraph/raster.hpp"

#include <algorithm>
#include <cmath>

#include "sketchgraph/simd/kernels.hpp"

namespace sketchgraph {

namespace {

// Absorbs last-bit noise for pixel centers that sit exactly on the coverage
// boundary (e.g. axis-aligned strokes at integer offsets).
constexpr double kCoverageSlack = 1e-9;

void check_in_canvas(const std::vector<Stroke>& strokes, int width, int height) {
  for (const Stroke& s : strokes)
    for (const Point& p : s.points)
      if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < width && p.y < height))
        throw Error("rasterize: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") out of bounds");
}

void draw_segment(RasterImage& img, Point a, Point b, double radius, const simd::Kernels& k) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const simd::SegmentCoverage seg{a.x, a.y, dx, dy, len2 > 0.0 ? 1.0 / len2 : 0.0, radius * radius + kCoverageSlack};
  const int x0 = std::max(0, static_cast<int>(std::ceil(std::min(a.x, b.x) - radius - 1e-6)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::floor(std::max(a.x, b.x) + radius + 1e-6)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(std::min(a.y, b.y) - radius - 1e-6)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + radius + 1e-6)));
  if (x0 > x1) return;
  for (int y = y0; y <= y1; ++y) k.cover_row(img.row(y).data(), x0, x1, static_cast<double>(y), seg);
}

} // namespace

void rasterize_into(RasterImage& image, const std::vector<Stroke>& strokes, double width) {
  if (!(width > 0.0)) throw Error("rasterize: width must be positive");
  check_in_canvas(strokes, image.width(), image.height());
  const double radius = width / 2.0;
  const simd::Kernels& k = simd::active();
  for (const Stroke& s : strokes) {
    if (s.points.size() == 1) {
      draw_segment(image, s.points[0], s.points[0], radius, k);
      continue;
    }
    for (std::size_t i = 1; i < s.points.size(); ++i) draw_segment(image, s.points[i - 1], s.points[i], radius, k);
  }
}

RasterImage rasterize(const std::vector<Stroke>& strokes, int size, double width) {
  if (size < 8) throw Error("rasterize: size must be at least 8");
  if (width < 1.0) throw Error("rasterize: width must be at least 1");
  RasterImage img(size, size);
  rasterize_into(img, strokes, width);
  return img;
}

RasterImage rasterize_disks(const std::vector<Point>& centers, int size, double radius) {
  RasterImage img(size, size);
  std::vector<Stroke> dots;
  dots.reserve(centers.size());
  for (const Point& c : centers) dots.push_back(Stroke{{c}});
  rasterize_into(img, dots, 2.0 * radius);
  return img;
}

SignedImage residual(const RasterImage& input, const RasterImage& rendered) {
  if (!input.same_shape(rendered)) throw Error("residual: dimension mismatch");
  SignedImage out(input.width(), input.height());
  simd::active().subtract(input.data().data(), rendered.data().data(), out.data().data(),
                          static_cast<std::int64_t>(input.size()));
  return out;
}

RasterImage subtract_clamped(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b)) throw Error("subtract: dimension mismatch");
  RasterImage out(a.width(), a.height());
  simd::active().subtract_clamp01(a.data().data(), b.data().data(), out.data().data(), static_cast<std::int64_t>(a.size()));
  return out;
}

RasterImage complement_sum(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b)) throw Error("complement: dimension mismatch");
  RasterImage out(a.width(), a.height());
  simd::active().complement_clamp01(a.data().data(), b.data().data(), out.data().data(),
                                    static_cast<std::int64_t>(a.size()));
  return out;
}

RasterImage dilate_disk(const RasterImage& image, int radius) {
  if (radius < 0) throw Error("dilate: radius must be non-negative");
  const int w = image.width(), h = image.height();
  const int r2 = radius * radius;
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float best = 0.0f;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = y + dy;
        if (sy < 0 || sy >= h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int sx = x + dx;
          if (dx * dx + dy * dy > r2 || sx < 0 || sx >= w) continue;
          best = std::max(best, image.at(sx, sy));
        }
      }
      out.at(x, y) = best;
    }
  return out;
}

RasterImage dilate_box(const RasterImage& image, int radius) {
  if (radius < 0) throw Error("dilate: radius must be non-negative");
  const int w = image.width(), h = image.height();
  RasterImage rows(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float best = 0.0f;
      for (int sx = std::max(0, x - radius); sx <= std::min(w - 1, x + radius); ++sx) best = std::max(best, image.at(sx, y));
      rows.at(x, y) = best;
    }
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float best = 0.0f;
      for (int sy = std::max(0, y - radius); sy <= std::min(h - 1, y + radius); ++sy) best = std::max(best, rows.at(x, sy));
      out.at(x, y) = best;
    }
  return out;
}

SignedImage aligned_residual(const RasterImage& input, const RasterImage& rendered, int tolerance) {
  if (tolerance <= 0) return residual(input, rendered);
  if (!input.same_shape(rendered)) throw Error("residual: dimension mismatch");
  const RasterImage missing = subtract_clamped(input, dilate_box(rendered, tolerance));
  const RasterImage extra = subtract_clamped(rendered, dilate_box(input, tolerance));
  SignedImage out(input.width(), input.height());
  simd::active().subtract(missing.data().data(), extra.data().data(), out.data().data(),
                          static_cast<std::int64_t>(input.size()));
  return out;
}

} // namespace sketchgraph
