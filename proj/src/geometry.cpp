#include "sketchgraph/geometry.hpp"

#include <algorithm>
#include <limits>

namespace sketchgraph {

double distance_to_segment(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

BBox bounding_box(const std::vector<Point>& points) {
  if (points.empty()) throw Error("bounding box of an empty point set");
  BBox box{points.front(), points.front()};
  for (const Point& p : points) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

BBox bounding_box(const std::vector<Stroke>& strokes) {
  std::vector<Point> all;
  for (const Stroke& s : strokes) all.insert(all.end(), s.points.begin(), s.points.end());
  return bounding_box(all);
}

Stroke dedupe_consecutive(Stroke stroke) {
  auto last = std::unique(stroke.points.begin(), stroke.points.end());
  stroke.points.erase(last, stroke.points.end());
  return stroke;
}

std::vector<Segment> stroke_segments(const std::vector<Stroke>& strokes) {
  std::vector<Segment> out;
  for (const Stroke& s : strokes)
    for (std::size_t i = 1; i < s.points.size(); ++i) out.push_back({s.points[i - 1], s.points[i]});
  return out;
}

bool all_finite(const std::vector<Stroke>& strokes) {
  for (const Stroke& s : strokes)
    for (const Point& p : s.points)
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  return true;
}

} // namespace sketchgraph
