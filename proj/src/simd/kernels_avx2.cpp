#include "sketchgraph/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace sketchgraph::simd {

namespace {

void cover_row(float* row, int x0, int x1, double y, const SegmentCoverage& seg) {
  const __m256d ax = _mm256_set1_pd(seg.ax);
  const __m256d dx = _mm256_set1_pd(seg.dx);
  const __m256d dy = _mm256_set1_pd(seg.dy);
  const __m256d inv = _mm256_set1_pd(seg.inv_len2);
  const __m256d lim = _mm256_set1_pd(seg.limit2);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const double wy_s = y - seg.ay;
  const __m256d wy = _mm256_set1_pd(wy_s);
  const __m256d wy_dy = _mm256_mul_pd(wy, dy);

  int x = x0;
  for (; x + 3 <= x1; x += 4) {
    const __m256d px = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x)), step);
    const __m256d wx = _mm256_sub_pd(px, ax);
    __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(wx, dx), wy_dy), inv);
    t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
    const __m256d cx = _mm256_sub_pd(wx, _mm256_mul_pd(t, dx));
    const __m256d cy = _mm256_sub_pd(wy, _mm256_mul_pd(t, dy));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(cx, cx), _mm256_mul_pd(cy, cy));
    const int hit = _mm256_movemask_pd(_mm256_cmp_pd(d2, lim, _CMP_LE_OQ));
    if (hit) {
      for (int lane = 0; lane < 4; ++lane)
        if (hit & (1 << lane)) row[x + lane] = 1.0f;
    }
  }
  for (; x <= x1; ++x) {
    const double wx = static_cast<double>(x) - seg.ax;
    double t = (wx * seg.dx + wy_s * seg.dy) * seg.inv_len2;
    t = t > 0.0 ? t : 0.0;
    t = t < 1.0 ? t : 1.0;
    const double cx = wx - t * seg.dx;
    const double cy = wy_s - t * seg.dy;
    if (cx * cx + cy * cy <= seg.limit2) row[x] = 1.0f;
  }
}

RoiSum roi_row(const float* row, int x0, int x1, double y, const RoiGeometry& roi) {
  const __m256d ux = _mm256_set1_pd(roi.ux);
  const __m256d vxo = _mm256_set1_pd(roi.vx);
  const __m256d ex = _mm256_set1_pd(roi.ex);
  const __m256d ey = _mm256_set1_pd(roi.ey);
  const __m256d tlo = _mm256_set1_pd(roi.t_lo);
  const __m256d thi = _mm256_set1_pd(roi.t_hi);
  const __m256d hw = _mm256_set1_pd(roi.half_width);
  const __m256d ex2 = _mm256_set1_pd(roi.exclude_r2);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d ones = _mm256_set1_pd(1.0);
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const double wy_s = y - roi.uy;
  const double vy_s = y - roi.vy;
  const __m256d wy = _mm256_set1_pd(wy_s);
  const __m256d wy_ey = _mm256_mul_pd(wy, ey);
  const __m256d wy_ex = _mm256_mul_pd(wy, ex);
  const __m256d wy2 = _mm256_mul_pd(wy, wy);
  const __m256d vy2 = _mm256_set1_pd(vy_s * vy_s);
  const bool exclude = roi.exclude_r2 >= 0.0;

  __m256d sum = _mm256_setzero_pd();
  __m256d cnt = _mm256_setzero_pd();
  int x = x0;
  for (; x + 3 <= x1; x += 4) {
    const __m256d px = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x)), step);
    const __m256d wx = _mm256_sub_pd(px, ux);
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(wx, ex), wy_ey);
    const __m256d s = _mm256_sub_pd(wy_ex, _mm256_mul_pd(wx, ey));
    __m256d in = _mm256_and_pd(_mm256_cmp_pd(t, tlo, _CMP_GE_OQ), _mm256_cmp_pd(t, thi, _CMP_LE_OQ));
    in = _mm256_and_pd(in, _mm256_cmp_pd(_mm256_and_pd(s, abs_mask), hw, _CMP_LE_OQ));
    if (exclude) {
      const __m256d du2 = _mm256_add_pd(_mm256_mul_pd(wx, wx), wy2);
      const __m256d vx = _mm256_sub_pd(px, vxo);
      const __m256d dv2 = _mm256_add_pd(_mm256_mul_pd(vx, vx), vy2);
      in = _mm256_and_pd(in, _mm256_cmp_pd(du2, ex2, _CMP_GT_OQ));
      in = _mm256_and_pd(in, _mm256_cmp_pd(dv2, ex2, _CMP_GT_OQ));
    }
    const __m256d vals = _mm256_cvtps_pd(_mm_loadu_ps(row + x));
    sum = _mm256_add_pd(sum, _mm256_and_pd(in, vals));
    cnt = _mm256_add_pd(cnt, _mm256_and_pd(in, ones));
  }
  alignas(32) double s4[4];
  alignas(32) double c4[4];
  _mm256_store_pd(s4, sum);
  _mm256_store_pd(c4, cnt);
  RoiSum acc;
  acc.sum = (s4[0] + s4[1]) + (s4[2] + s4[3]);
  acc.count = static_cast<std::int64_t>((c4[0] + c4[1]) + (c4[2] + c4[3]));
  for (; x <= x1; ++x) {
    const double wx = static_cast<double>(x) - roi.ux;
    const double t = wx * roi.ex + wy_s * roi.ey;
    const double s = wy_s * roi.ex - wx * roi.ey;
    bool in = t >= roi.t_lo && t <= roi.t_hi && std::fabs(s) <= roi.half_width;
    if (in && exclude) {
      const double vx = static_cast<double>(x) - roi.vx;
      in = (wx * wx + wy_s * wy_s) > roi.exclude_r2 && (vx * vx + vy_s * vy_s) > roi.exclude_r2;
    }
    if (in) {
      acc.sum += static_cast<double>(row[x]);
      ++acc.count;
    }
  }
  return acc;
}

void subtract(const float* a, const float* b, float* out, std::int64_t n) {
  std::int64_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

inline float clamp01(float v) {
  v = v > 0.0f ? v : 0.0f;
  return v < 1.0f ? v : 1.0f;
}

void subtract_clamp01(const float* a, const float* b, float* out, std::int64_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
    _mm256_storeu_ps(out + i, _mm256_min_ps(_mm256_max_ps(d, zero), one));
  }
  for (; i < n; ++i) out[i] = clamp01(a[i] - b[i]);
}

void complement_clamp01(const float* a, const float* b, float* out, std::int64_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 d = _mm256_sub_ps(_mm256_sub_ps(one, _mm256_loadu_ps(a + i)), _mm256_loadu_ps(b + i));
    _mm256_storeu_ps(out + i, _mm256_min_ps(_mm256_max_ps(d, zero), one));
  }
  for (; i < n; ++i) out[i] = clamp01((1.0f - a[i]) - b[i]);
}

void tam_row(const float* illum, float* out, std::int64_t n, const float* const* tex_rows,
             const float* breakpoints, int k, float black_floor, bool literal_direction) {
  const __m256 floor_v = _mm256_set1_ps(black_floor);
  const __m256 zero = _mm256_setzero_ps();
  std::int64_t x = 0;
  for (; x + 8 <= n; x += 8) {
    const __m256 p = _mm256_loadu_ps(illum + x);
    __m256 v = _mm256_set1_ps(1.0f);
    for (int i = 0; i < k; ++i) {
      const __m256 b = _mm256_set1_ps(breakpoints[i]);
      const __m256 applies = literal_direction ? _mm256_cmp_ps(b, p, _CMP_LE_OQ) : _mm256_cmp_ps(p, b, _CMP_LE_OQ);
      const __m256 prod = _mm256_mul_ps(v, _mm256_loadu_ps(tex_rows[i] + x));
      v = _mm256_blendv_ps(v, prod, applies);
    }
    v = _mm256_blendv_ps(v, zero, _mm256_cmp_ps(p, floor_v, _CMP_LT_OQ));
    _mm256_storeu_ps(out + x, v);
  }
  for (; x < n; ++x) {
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

const Kernels& avx2_table() {
  static const Kernels table{Isa::avx2, cover_row, roi_row, subtract, subtract_clamp01, complement_clamp01, tam_row};
  return table;
}

} // namespace sketchgraph::simd
