#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "sketchgraph/graphinfer.hpp"
#include "sketchgraph/simd/kernels.hpp"
#include "sketchgraph/sketch_gen.hpp"
#include "sketchgraph/tam.hpp"

using namespace sketchgraph;
using simd::Kernels;

namespace {

bool same_bits(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

std::vector<float> random_floats(std::mt19937_64& rng, std::size_t n, float lo, float hi) {
  std::uniform_real_distribution<float> u(lo, hi);
  std::vector<float> v(n);
  for (float& x : v) x = u(rng);
  return v;
}

// Restores the startup kernel table when a test forces another one.
struct IsaGuard {
  simd::Isa saved = simd::active().isa;
  ~IsaGuard() { simd::force_isa(saved); }
};

} // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar table is always available") {
  CHECK(simd::scalar_kernels().isa == simd::Isa::scalar);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
}

TEST_CASE("elementwise kernels are bit-identical across ISAs") {
  const Kernels* fast = simd::avx2_kernels();
  if (!fast) {
    MESSAGE("AVX2 unavailable; nothing to compare");
    return;
  }
  const Kernels& ref = simd::scalar_kernels();
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1000u}) {
    const auto a = random_floats(rng, n, -1.5f, 1.5f);
    const auto b = random_floats(rng, n, -1.5f, 1.5f);
    std::vector<float> r1(n), r2(n);
    ref.subtract(a.data(), b.data(), r1.data(), n);
    fast->subtract(a.data(), b.data(), r2.data(), n);
    CHECK(same_bits(r1, r2));
    ref.subtract_clamp01(a.data(), b.data(), r1.data(), n);
    fast->subtract_clamp01(a.data(), b.data(), r2.data(), n);
    CHECK(same_bits(r1, r2));
    ref.complement_clamp01(a.data(), b.data(), r1.data(), n);
    fast->complement_clamp01(a.data(), b.data(), r2.data(), n);
    CHECK(same_bits(r1, r2));
  }
}

TEST_CASE("coverage rows are bit-identical across ISAs") {
  const Kernels* fast = simd::avx2_kernels();
  if (!fast) return;
  const Kernels& ref = simd::scalar_kernels();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(0.0, 40.0), w(0.5, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double ax = c(rng), ay = c(rng), bx = trial % 7 == 0 ? ax : c(rng), by = c(rng);
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    const double r = w(rng);
    const simd::SegmentCoverage seg{ax, ay, dx, dy, len2 > 0 ? 1.0 / len2 : 0.0, r * r + 1e-9};
    const int x0 = trial % 5, x1 = 40 - trial % 3;
    std::vector<float> r1(41, 0.0f), r2(41, 0.0f);
    const double y = static_cast<double>(trial % 41);
    ref.cover_row(r1.data(), x0, x1, y, seg);
    fast->cover_row(r2.data(), x0, x1, y, seg);
    REQUIRE(same_bits(r1, r2));
  }
}

TEST_CASE("ROI rows agree across ISAs") {
  const Kernels* fast = simd::avx2_kernels();
  if (!fast) return;
  const Kernels& ref = simd::scalar_kernels();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(0.0, 60.0), beta(0.5, 8.0);
  const auto row = random_floats(rng, 61, -1.0f, 1.0f);
  for (int trial = 0; trial < 500; ++trial) {
    Point u{c(rng), c(rng)}, v{c(rng), c(rng)};
    if (u == v) continue;
    simd::RoiGeometry roi = infer::make_roi(u, v, beta(rng));
    if (trial % 2) roi.exclude_r2 = 4.0;
    const double y = static_cast<double>(trial % 61);
    const simd::RoiSum s1 = ref.roi_row(row.data(), trial % 9, 60, y, roi);
    const simd::RoiSum s2 = fast->roi_row(row.data(), trial % 9, 60, y, roi);
    REQUIRE(s1.count == s2.count);
    CHECK(s1.sum == doctest::Approx(s2.sum).epsilon(1e-12));
  }
}

TEST_CASE("TAM rows are bit-identical across ISAs") {
  const Kernels* fast = simd::avx2_kernels();
  if (!fast) return;
  const Kernels& ref = simd::scalar_kernels();
  std::mt19937_64 rng(4);
  const std::size_t n = 77;
  const auto illum = random_floats(rng, n, 0.0f, 1.0f);
  std::vector<std::vector<float>> tex;
  std::vector<const float*> rows;
  for (int i = 0; i < 4; ++i) tex.push_back(random_floats(rng, n, 0.0f, 1.0f));
  for (auto& t : tex) rows.push_back(t.data());
  const float bps[] = {0.2f, 0.4f, 0.6f, 0.8f};
  for (bool literal : {false, true}) {
    std::vector<float> r1(n), r2(n);
    ref.tam_row(illum.data(), r1.data(), n, rows.data(), bps, 4, 0.05f, literal);
    fast->tam_row(illum.data(), r2.data(), n, rows.data(), bps, 4, 0.05f, literal);
    CHECK(same_bits(r1, r2));
  }
}

TEST_CASE("whole pipeline stages agree across ISAs") {
  if (!simd::avx2_kernels()) return;
  IsaGuard guard;
  DatasetParams params;
  const Sample s = make_dataset_sample(21, 4, params);
  const infer::InferParams ip;

  REQUIRE(simd::force_isa(simd::Isa::scalar));
  const RasterImage img_scalar = rasterize(s.sketch.strokes, 256, 2.0);
  const infer::InferResult r_scalar = infer::feedback_infer(s.image, s.masks, ip);
  const RasterImage tam_scalar = tam::tam_shade(s.image, tam::default_spec());

  REQUIRE(simd::force_isa(simd::Isa::avx2));
  CHECK(rasterize(s.sketch.strokes, 256, 2.0) == img_scalar);
  const infer::InferResult r_avx = infer::feedback_infer(s.image, s.masks, ip);
  CHECK(r_avx.graph == r_scalar.graph);
  CHECK(r_avx.trace == r_scalar.trace);
  CHECK(tam::tam_shade(s.image, tam::default_spec()) == tam_scalar);
}

} // TEST_SUITE
