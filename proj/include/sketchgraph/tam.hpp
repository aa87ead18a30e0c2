#pragma once

#include <filesystem>
#include <vector>

#include "sketchgraph/raster.hpp"

namespace sketchgraph::tam {

/// Tonal art map: textures[i] is composited wherever the illumination is at
/// or below breakpoints[i], so darker pixels accumulate every lighter tone's
/// hatching. With literal_direction the condition becomes breakpoints[i] <=
/// illumination instead. Pixels darker than black_floor are 0; pixels
/// brighter than every breakpoint stay 1.
struct TamSpec {
  std::vector<float> breakpoints;  // strictly ascending, in (0, 1]
  std::vector<RasterImage> textures;
  float black_floor = 0.02f;
  bool literal_direction = false;
};

struct TileOffset {
  int x = 0;
  int y = 0;
};

void validate(const TamSpec& spec);

/// out(f) = product of textures[i]((f + offset) mod texture size) over the
/// breakpoints that apply at illumination P(f).
RasterImage tam_shade(const RasterImage& illumination, const TamSpec& spec, TileOffset offset = {});

/// Tileable hatch pattern: parallel lines at angle_deg, `spacing` px apart,
/// of value `ink` on a white background.
RasterImage hatch_texture(int size, double angle_deg, double spacing, float ink = 0.25f);

/// Four hatch tones at breakpoints {0.2, 0.4, 0.6, 0.8} plus pure white and
/// pure black (floor 0.02).
TamSpec default_spec(int texture_size = 32);

/// Textures are the directory's *.png files in name order, paired with
/// `breakpoints` in ascending order.
TamSpec load_spec(const std::filesystem::path& dir, std::vector<float> breakpoints, float black_floor);

} // namespace sketchgraph::tam
