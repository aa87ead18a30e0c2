#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the active table is picked once at startup from
// CPUID and can be forced with SKETCHGRAPH_ISA=scalar|avx2.
//
// Contract shared by all implementations: results are bit-identical to the
// scalar reference, except RoiSum::sum which may differ in summation order.

#include <cstdint>
#include <string_view>

namespace sketchgraph::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Closest-point distance test against one segment (a, a + d).
struct SegmentCoverage {
  double ax, ay;
  double dx, dy;
  double inv_len2;  // 1 / |d|^2, or 0 for a degenerate (point) segment
  double limit2;    // squared inclusion radius
};

/// Oriented rectangle membership relative to origin u with unit axis e:
///   t = (p - u) . e in [t_lo, t_hi], |(p - u) x e| <= half_width,
/// and, when exclude_r2 >= 0, |p - u|^2 > exclude_r2 and |p - v|^2 > exclude_r2.
struct RoiGeometry {
  double ux, uy;
  double ex, ey;
  double t_lo, t_hi;
  double half_width;
  double vx, vy;
  double exclude_r2;
};

struct RoiSum {
  double sum = 0.0;
  std::int64_t count = 0;
};

struct Kernels {
  Isa isa;
  // row[x] = 1 for x in [x0, x1] whose center (x, y) is covered.
  void (*cover_row)(float* row, int x0, int x1, double y, const SegmentCoverage& seg);
  // Sum and count of row[x], x in [x0, x1], whose center lies in the ROI.
  RoiSum (*roi_row)(const float* row, int x0, int x1, double y, const RoiGeometry& roi);
  // out = a - b
  void (*subtract)(const float* a, const float* b, float* out, std::int64_t n);
  // out = clamp(a - b, 0, 1)
  void (*subtract_clamp01)(const float* a, const float* b, float* out, std::int64_t n);
  // out = clamp(1 - a - b, 0, 1)
  void (*complement_clamp01)(const float* a, const float* b, float* out, std::int64_t n);
  // Tonal art map compositing of one row; see tam.hpp for the rule.
  // tex_rows[i] points at texture i already tiled to n samples.
  void (*tam_row)(const float* illum, float* out, std::int64_t n, const float* const* tex_rows,
                  const float* breakpoints, int k, float black_floor, bool literal_direction);
};

const Kernels& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const Kernels* avx2_kernels();
/// The table used by the library.
const Kernels& active();

/// Test hook: force a table for the rest of the process. Returns false if
/// the requested ISA is unavailable.
bool force_isa(Isa isa);

} // namespace sketchgraph::simd
