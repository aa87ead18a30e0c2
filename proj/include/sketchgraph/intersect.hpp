#pragma once

#include <vector>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph {

/// Default snap tolerance for endpoint touches, in canvas units.
inline constexpr double kIntersectionEps = 1e-6;

struct Intersection {
  Point point;
  int first = 0;   // smaller segment id
  int second = 0;  // larger segment id

  friend bool operator==(const Intersection&, const Intersection&) = default;
};

/// Contact points of two segments under tolerance eps.
///
/// Non-parallel segments yield at most one point: an endpoint of either
/// segment lying within eps of the other (T-junctions, shared endpoints,
/// near misses) takes precedence; otherwise the transversal crossing if the
/// two parameter values lie in [0, 1]. Parallel and collinear segments yield
/// only the endpoints that touch the other segment, deduplicated within eps.
std::vector<Point> intersect_pair(const Segment& s, const Segment& t, double eps = kIntersectionEps);

/// All pairwise contacts via a plane sweep over x. Candidate pairs are those
/// whose eps-expanded bounding boxes overlap while both are active on the
/// sweep line; each candidate is classified by intersect_pair, so the result
/// matches exhaustive pairwise testing exactly. Sorted by (first, second, x, y).
std::vector<Intersection> find_intersections(const std::vector<Segment>& segments, double eps = kIntersectionEps);

/// Canonical ordering used by find_intersections.
void sort_intersections(std::vector<Intersection>& xs);

} // namespace sketchgraph
