#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph {

namespace detail {

// Row-major float plane. The value range is a property of the tag type.
template <class Tag>
class Plane {
public:
  Plane() = default;
  Plane(int width, int height, float fill = 0.0f)
      : width_(width), height_(height), data_(checked_area(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<float> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const float> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  bool same_shape(const Plane& o) const { return width_ == o.width_ && height_ == o.height_; }
  template <class U>
  bool same_shape(const Plane<U>& o) const { return width_ == o.width() && height_ == o.height(); }

  friend bool operator==(const Plane&, const Plane&) = default;

private:
  static std::size_t checked_area(int w, int h) {
    if (w <= 0 || h <= 0) throw Error("image dimensions must be positive");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

struct UnitTag {};
struct SignedTag {};

} // namespace detail

/// Grayscale plane with values in [0, 1]; ink = 1, blank = 0.
using RasterImage = detail::Plane<detail::UnitTag>;
/// Plane with values in [-1, 1] (residuals).
using SignedImage = detail::Plane<detail::SignedTag>;

/// Binary coverage raster: a pixel is 1 iff its center is within width/2 of
/// any stroke segment (round caps and joins). A one-point stroke is a disk.
/// Throws Error("... out of bounds") for points outside [0, size)^2.
RasterImage rasterize(const std::vector<Stroke>& strokes, int size, double width);

/// Same rule, drawing onto an existing image (values are max-combined).
void rasterize_into(RasterImage& image, const std::vector<Stroke>& strokes, double width);

/// Disks of the given radius at each point.
RasterImage rasterize_disks(const std::vector<Point>& centers, int size, double radius);

/// Elementwise input - rendered.
SignedImage residual(const RasterImage& input, const RasterImage& rendered);

/// Elementwise clamp(a - b, 0, 1).
RasterImage subtract_clamped(const RasterImage& a, const RasterImage& b);

/// Elementwise clamp(1 - a - b, 0, 1).
RasterImage complement_sum(const RasterImage& a, const RasterImage& b);

/// Max filter over the disk dx^2 + dy^2 <= r^2.
RasterImage dilate_disk(const RasterImage& image, int radius);

/// Max filter over the (2r+1) x (2r+1) square.
RasterImage dilate_box(const RasterImage& image, int radius);

/// Residual that ignores misalignment up to `tolerance` px (Chebyshev):
/// clamp(input - dilate(rendered)) - clamp(rendered - dilate(input)).
/// tolerance 0 reduces to residual(input, rendered).
SignedImage aligned_residual(const RasterImage& input, const RasterImage& rendered, int tolerance);

} // namespace sketchgraph
