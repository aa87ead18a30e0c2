#include <doctest.h>

#include <filesystem>
#include <random>

#include "sketchgraph/png_io.hpp"
#include "sketchgraph/tam.hpp"

using namespace sketchgraph;
using namespace sketchgraph::tam;

namespace {

TamSpec constant_spec(std::vector<float> bps, std::vector<float> values, float floor) {
  TamSpec s;
  s.breakpoints = std::move(bps);
  for (float v : values) s.textures.emplace_back(4, 4, v);
  s.black_floor = floor;
  return s;
}

RasterImage random_illumination(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  RasterImage img(w, h);
  for (float& v : img.data()) v = u(rng);
  return img;
}

} // namespace

TEST_SUITE("tam") {

TEST_CASE("full illumination stays white") {
  const RasterImage out = tam_shade(RasterImage(9, 7, 1.0f), default_spec());
  for (float v : out.data()) CHECK(v == 1.0f);
}

TEST_CASE("identity textures only apply the black floor") {
  const TamSpec spec = constant_spec({0.3f, 0.6f, 0.9f}, {1.0f, 1.0f, 1.0f}, 0.1f);
  RasterImage p(5, 1);
  p.at(0, 0) = 0.0f;
  p.at(1, 0) = 0.09f;
  p.at(2, 0) = 0.1f;
  p.at(3, 0) = 0.5f;
  p.at(4, 0) = 1.0f;
  const RasterImage out = tam_shade(p, spec);
  CHECK(out.at(0, 0) == 0.0f);
  CHECK(out.at(1, 0) == 0.0f);
  CHECK(out.at(2, 0) == 1.0f);
  CHECK(out.at(3, 0) == 1.0f);
  CHECK(out.at(4, 0) == 1.0f);
}

TEST_CASE("constant textures multiply at the applicable breakpoints") {
  const TamSpec spec = constant_spec({0.25f, 0.5f, 0.75f, 1.0f}, {0.9f, 0.8f, 0.7f, 0.6f}, 0.0f);
  const RasterImage out = tam_shade(RasterImage(3, 3, 0.6f), spec);
  for (float v : out.data()) CHECK(v == doctest::Approx(0.42f));

  // Exactly on a breakpoint counts as darker than it.
  CHECK(tam_shade(RasterImage(1, 1, 0.5f), spec).at(0, 0) == doctest::Approx(0.8f * 0.7f * 0.6f));
}

TEST_CASE("literal direction uses the opposite inequality") {
  TamSpec spec = constant_spec({0.25f, 0.5f, 0.75f, 1.0f}, {0.9f, 0.8f, 0.7f, 0.6f}, 0.0f);
  spec.literal_direction = true;
  CHECK(tam_shade(RasterImage(1, 1, 0.6f), spec).at(0, 0) == doctest::Approx(0.9f * 0.8f));
}

TEST_CASE("darker illumination never gives a lighter tone") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  const TamSpec spec = default_spec(16);
  for (int trial = 0; trial < 100; ++trial) {
    const RasterImage p1 = random_illumination(rng, 23, 11);
    RasterImage p2 = p1;
    for (float& v : p2.data()) v = std::min(1.0f, v + u(rng) * 0.5f);
    const TileOffset off{trial, 3 * trial};
    const RasterImage o1 = tam_shade(p1, spec, off), o2 = tam_shade(p2, spec, off);
    for (std::size_t k = 0; k < o1.size(); ++k) {
      REQUIRE(o1.data()[k] <= o2.data()[k]);
      REQUIRE(o1.data()[k] >= 0.0f);
      REQUIRE(o2.data()[k] <= 1.0f);
    }
  }
}

TEST_CASE("texture sets are nested") {
  // Power-of-two textures make every product ratio exact.
  const TamSpec spec = constant_spec({0.2f, 0.4f, 0.6f, 0.8f}, {0.5f, 0.25f, 0.125f, 0.0625f}, 0.0f);
  float prev = 1.0f;
  for (float p = 1.0f; p >= 0.0f; p -= 0.05f) {
    const float v = tam_shade(RasterImage(1, 1, p), spec).at(0, 0);
    CHECK(v <= prev);
    // Every factor applied at a lighter level is still applied here.
    CHECK(std::fmod(static_cast<double>(prev) / v, 1.0) == doctest::Approx(0.0));
    prev = v;
  }
}

TEST_CASE("screen-space tiling with offset") {
  TamSpec spec;
  spec.breakpoints = {1.0f};
  RasterImage tex(2, 2);
  tex.at(0, 0) = 0.1f;
  tex.at(1, 0) = 0.2f;
  tex.at(0, 1) = 0.3f;
  tex.at(1, 1) = 0.4f;
  spec.textures = {tex};
  spec.black_floor = 0.0f;
  const RasterImage out = tam_shade(RasterImage(3, 3, 0.5f), spec, {1, 0});
  CHECK(out.at(0, 0) == 0.2f);
  CHECK(out.at(1, 0) == 0.1f);
  CHECK(out.at(2, 0) == 0.2f);
  CHECK(out.at(0, 1) == 0.4f);
  CHECK(out.at(0, 2) == 0.2f);
}

TEST_CASE("invalid tonal art maps are rejected") {
  CHECK_THROWS_AS(validate(constant_spec({0.5f, 1.0f}, {0.5f}, 0.0f)), Error);
  CHECK_THROWS_AS(validate(constant_spec({}, {}, 0.0f)), Error);
  CHECK_THROWS_AS(validate(constant_spec({0.6f, 0.4f}, {0.5f, 0.5f}, 0.0f)), Error);
  CHECK_THROWS_AS(validate(constant_spec({0.0f}, {0.5f}, 0.0f)), Error);
  CHECK_THROWS_AS(tam_shade(RasterImage(2, 2), constant_spec({0.5f, 1.0f}, {0.5f}, 0.0f)), Error);
  CHECK_NOTHROW(validate(default_spec()));
}

TEST_CASE("hatch textures are tileable and in range") {
  const RasterImage h = hatch_texture(16, 45.0, 4.0);
  bool inked = false;
  for (float v : h.data()) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
    inked |= v < 1.0f;
  }
  CHECK(inked);
}

TEST_CASE("texture catalogue from a directory") {
  const auto dir = std::filesystem::temp_directory_path() / "sketchgraph_tam_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  save_png_gray(dir / "b.png", RasterImage(4, 4, 0.5f));
  save_png_gray(dir / "a.png", RasterImage(4, 4, 1.0f));
  const TamSpec spec = load_spec(dir, {0.3f, 0.7f}, 0.0f);
  REQUIRE(spec.textures.size() == 2);
  CHECK(spec.textures[0].at(0, 0) == 1.0f);
  CHECK(spec.textures[1].at(0, 0) == doctest::Approx(0.5f).epsilon(0.01));
  CHECK_THROWS_AS(load_spec(dir, {0.5f}, 0.0f), Error);
  std::filesystem::remove_all(dir);
}

} // TEST_SUITE
