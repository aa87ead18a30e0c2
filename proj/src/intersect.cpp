#include "sketchgraph/intersect.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

namespace sketchgraph {

namespace {

// Relative sine below which two directions are treated as parallel.
constexpr double kParallelSine = 1e-12;

struct Extent {
  double xmin, xmax, ymin, ymax;
};

// Boxes are padded by 2 eps so rounding in the distance test can never
// produce a contact between boxes the sweep considers disjoint.
Extent extent(const Segment& s, double eps) {
  eps *= 2.0;
  return {std::min(s.a.x, s.b.x) - eps, std::max(s.a.x, s.b.x) + eps, std::min(s.a.y, s.b.y) - eps,
          std::max(s.a.y, s.b.y) + eps};
}

void add_unique(std::vector<Point>& pts, Point p, double eps) {
  for (const Point& q : pts)
    if (distance(p, q) <= eps) return;
  pts.push_back(p);
}

} // namespace

std::vector<Point> intersect_pair(const Segment& s, const Segment& t, double eps) {
  std::vector<Point> touches;
  for (Point e : {s.a, s.b})
    if (distance_to_segment(e, t.a, t.b) <= eps) add_unique(touches, e, eps);
  for (Point e : {t.a, t.b})
    if (distance_to_segment(e, s.a, s.b) <= eps) add_unique(touches, e, eps);

  const Point d1 = s.b - s.a;
  const Point d2 = t.b - t.a;
  const double denom = cross(d1, d2);
  const bool parallel = std::abs(denom) <= kParallelSine * norm(d1) * norm(d2);
  if (parallel) return touches;
  if (!touches.empty()) return {touches.front()};

  const Point w = t.a - s.a;
  const double ta = cross(w, d2) / denom;
  const double tb = cross(w, d1) / denom;
  if (ta >= 0.0 && ta <= 1.0 && tb >= 0.0 && tb <= 1.0) return {s.a + ta * d1};
  return {};
}

void sort_intersections(std::vector<Intersection>& xs) {
  std::sort(xs.begin(), xs.end(), [](const Intersection& a, const Intersection& b) {
    return std::tie(a.first, a.second, a.point.x, a.point.y) < std::tie(b.first, b.second, b.point.x, b.point.y);
  });
}

std::vector<Intersection> find_intersections(const std::vector<Segment>& segments, double eps) {
  const int n = static_cast<int>(segments.size());
  std::vector<Extent> ext(n);
  for (int i = 0; i < n; ++i) ext[i] = extent(segments[i], eps);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ext[a].xmin < ext[b].xmin; });

  // Active segments, retired in order of their right end.
  using Retire = std::pair<double, int>;
  std::priority_queue<Retire, std::vector<Retire>, std::greater<>> retire;
  std::vector<char> active(n, 0);
  std::vector<int> active_ids;

  std::vector<Intersection> out;
  for (int id : order) {
    const double sweep_x = ext[id].xmin;
    bool removed = false;
    while (!retire.empty() && retire.top().first < sweep_x) {
      active[retire.top().second] = 0;
      retire.pop();
      removed = true;
    }
    if (removed)
      active_ids.erase(std::remove_if(active_ids.begin(), active_ids.end(), [&](int k) { return !active[k]; }),
                       active_ids.end());

    for (int other : active_ids) {
      if (ext[other].ymax < ext[id].ymin || ext[id].ymax < ext[other].ymin) continue;
      const int lo = std::min(id, other);
      const int hi = std::max(id, other);
      for (const Point& p : intersect_pair(segments[lo], segments[hi], eps)) out.push_back({p, lo, hi});
    }
    active[id] = 1;
    active_ids.push_back(id);
    retire.push({ext[id].xmax, id});
  }
  sort_intersections(out);
  return out;
}

} // namespace sketchgraph
