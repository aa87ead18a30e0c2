#include "sketchgraph/simd/kernels.hpp"

#include <cmath>

namespace sketchgraph::simd {

namespace {

// max/min written with the same operand selection as _mm256_max_pd/_min_pd.
inline double max_sel(double a, double b) { return a > b ? a : b; }
inline double min_sel(double a, double b) { return a < b ? a : b; }

void cover_row(float* row, int x0, int x1, double y, const SegmentCoverage& seg) {
  const double wy = y - seg.ay;
  for (int x = x0; x <= x1; ++x) {
    const double wx = static_cast<double>(x) - seg.ax;
    double t = (wx * seg.dx + wy * seg.dy) * seg.inv_len2;
    t = min_sel(max_sel(t, 0.0), 1.0);
    const double cx = wx - t * seg.dx;
    const double cy = wy - t * seg.dy;
    if (cx * cx + cy * cy <= seg.limit2) row[x] = 1.0f;
  }
}

RoiSum roi_row(const float* row, int x0, int x1, double y, const RoiGeometry& roi) {
  RoiSum acc;
  const double wy = y - roi.uy;
  const double vy = y - roi.vy;
  for (int x = x0; x <= x1; ++x) {
    const double wx = static_cast<double>(x) - roi.ux;
    const double t = wx * roi.ex + wy * roi.ey;
    const double s = wy * roi.ex - wx * roi.ey;
    bool in = t >= roi.t_lo && t <= roi.t_hi && std::fabs(s) <= roi.half_width;
    if (in && roi.exclude_r2 >= 0.0) {
      const double vx = static_cast<double>(x) - roi.vx;
      in = (wx * wx + wy * wy) > roi.exclude_r2 && (vx * vx + vy * vy) > roi.exclude_r2;
    }
    if (in) {
      acc.sum += static_cast<double>(row[x]);
      ++acc.count;
    }
  }
  return acc;
}

void subtract(const float* a, const float* b, float* out, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

inline float clamp01(float v) {
  v = v > 0.0f ? v : 0.0f;
  return v < 1.0f ? v : 1.0f;
}

void subtract_clamp01(const float* a, const float* b, float* out, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) out[i] = clamp01(a[i] - b[i]);
}

void complement_clamp01(const float* a, const float* b, float* out, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) out[i] = clamp01((1.0f - a[i]) - b[i]);
}

void tam_row(const float* illum, float* out, std::int64_t n, const float* const* tex_rows,
             const float* breakpoints, int k, float black_floor, bool literal_direction) {
  for (std::int64_t x = 0; x < n; ++x) {
    const float p = illum[x];
    float v = 1.0f;
    for (int i = 0; i < k; ++i) {
      const bool applies = literal_direction ? (breakpoints[i] <= p) : (p <= breakpoints[i]);
      if (applies) v = v * tex_rows[i][x];
    }
    out[x] = p < black_floor ? 0.0f : v;
  }
}

} // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{Isa::scalar, cover_row, roi_row, subtract, subtract_clamp01, complement_clamp01, tam_row};
  return table;
}

} // namespace sketchgraph::simd
