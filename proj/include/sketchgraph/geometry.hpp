#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sketchgraph {

/// Thrown for every contract violation in the library. The message is meant
/// for end users (the CLI prints it verbatim).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A location in canvas pixels. Pixel (i, j) has its center at (i, j).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

double distance_to_segment(Point p, Point a, Point b);

struct Segment {
  Point a;
  Point b;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Stroke {
  std::vector<Point> points;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Sketch {
  std::vector<Stroke> strokes;
  int canvas_size = 256;

  friend bool operator==(const Sketch&, const Sketch&) = default;
};

struct BBox {
  Point min{0.0, 0.0};
  Point max{0.0, 0.0};

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

/// Bounding box of all stroke points. Throws on a sketch without points.
BBox bounding_box(const std::vector<Stroke>& strokes);
BBox bounding_box(const std::vector<Point>& points);

/// Removes consecutive duplicate points so the Stroke invariant holds.
Stroke dedupe_consecutive(Stroke stroke);

/// Flattens strokes into their consecutive-point segments, in stroke order.
std::vector<Segment> stroke_segments(const std::vector<Stroke>& strokes);

bool all_finite(const std::vector<Stroke>& strokes);

} // namespace sketchgraph
