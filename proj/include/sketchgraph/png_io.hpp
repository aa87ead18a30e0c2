#pragma once

#include <array>
#include <filesystem>

#include "sketchgraph/raster.hpp"

namespace sketchgraph {

/// 8-bit grayscale PNG; value v in [0,1] is stored as round(255 v).
/// Color inputs are converted to gray on load.
RasterImage load_png_gray(const std::filesystem::path& path);
void save_png_gray(const std::filesystem::path& path, const RasterImage& image);

/// 8-bit RGB PNG, one plane per channel.
std::array<RasterImage, 3> load_png_rgb(const std::filesystem::path& path);
void save_png_rgb(const std::filesystem::path& path, const RasterImage& r, const RasterImage& g, const RasterImage& b);

} // namespace sketchgraph
