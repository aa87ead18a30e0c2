#pragma once

#include <string>
#include <vector>

#include "sketchgraph/graph.hpp"

namespace sketchgraph::toolpath {

/// Ordered pen-down paths over vertex ids. Consecutive ids in a stroke are an
/// edge of the source graph and every edge is used exactly once.
struct StrokeSequence {
  std::vector<std::vector<int>> strokes;

  friend bool operator==(const StrokeSequence&, const StrokeSequence&) = default;
};

/// Greedy edge-popping traversal. Adjacency lists are kept sorted and the
/// smallest neighbour is always taken; each stroke starts at the smallest
/// vertex id that still has an incident edge and is extended from its
/// current end until that end has no edges left.
StrokeSequence strokes_from_graph(const SkeletonGraph& graph);

/// Maps canvas pixels to plotter millimetres. A point p maps to
/// offset + scale * p.
struct PlateTransform {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Point apply(Point p) const { return {offset_x + scale * p.x, offset_y + scale * p.y}; }
};

inline constexpr double kPlateSize = 64.0;
inline constexpr double kPlateOrigin = 25.0;

/// Uniform scale plate / max(width, height), content centered in the square
/// plate whose lower corner is (origin, origin). A zero-extent box gets
/// scale 1 and is placed at the plate center.
PlateTransform fit_to_plate(const BBox& bbox, double plate = kPlateSize, double origin = kPlateOrigin);

/// G00 Z-5 first, then per stroke: first point, G01 Z0, remaining points,
/// G00 Z-5. Coordinates are "X%.2f Y%.2f" in millimetres.
std::string emit_gcode(const StrokeSequence& seq, const std::vector<Point>& vertices, const PlateTransform& transform);

/// Minimal SVG document, one <path d="M x0 y0 L x1 y1 ..." /> per stroke, in
/// canvas pixels.
std::string emit_svg(const StrokeSequence& seq, const std::vector<Point>& vertices, int canvas_size);

std::string strokes_to_json(const StrokeSequence& seq);
StrokeSequence strokes_from_json(const std::string& text);

} // namespace sketchgraph::toolpath
