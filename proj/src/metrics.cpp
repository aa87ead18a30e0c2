#include "sketchgraph/metrics.hpp"

#include <algorithm>
#include <tuple>

namespace sketchgraph {

std::vector<int> match_vertices(const std::vector<Point>& predicted, const std::vector<Point>& reference, double tol) {
  std::vector<std::tuple<double, int, int>> candidates;
  for (int i = 0; i < static_cast<int>(predicted.size()); ++i)
    for (int j = 0; j < static_cast<int>(reference.size()); ++j) {
      const double d = distance(predicted[i], reference[j]);
      if (d <= tol) candidates.emplace_back(d, i, j);
    }
  std::sort(candidates.begin(), candidates.end());
  std::vector<int> match(predicted.size(), -1);
  std::vector<char> taken(reference.size(), 0);
  for (const auto& [d, i, j] : candidates) {
    if (match[i] >= 0 || taken[j]) continue;
    match[i] = j;
    taken[j] = 1;
  }
  return match;
}

double GraphScore::precision() const {
  const int p = true_positive + false_positive;
  return p == 0 ? 1.0 : static_cast<double>(true_positive) / p;
}

double GraphScore::recall() const {
  const int r = true_positive + false_negative;
  return r == 0 ? 1.0 : static_cast<double>(true_positive) / r;
}

double GraphScore::f1() const {
  const int denom = 2 * true_positive + false_positive + false_negative;
  return denom == 0 ? 1.0 : 2.0 * true_positive / denom;
}

GraphScore score_edges(const std::vector<Point>& predicted_vertices, const std::vector<Edge>& predicted_edges,
                       const SkeletonGraph& reference, double vertex_tol) {
  const std::vector<int> match = match_vertices(predicted_vertices, reference.vertices(), vertex_tol);
  GraphScore s;
  s.reference_vertices = reference.vertex_count();
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] < 0) continue;
    ++s.matched_vertices;
    s.max_vertex_error = std::max(s.max_vertex_error, distance(predicted_vertices[i], reference.vertices()[match[i]]));
  }
  std::vector<Edge> mapped;
  for (const Edge& e : predicted_edges) {
    const int a = match[e.first];
    const int b = match[e.second];
    if (a >= 0 && b >= 0 && reference.has_edge(a, b)) {
      mapped.push_back(make_edge(a, b));
    } else {
      ++s.false_positive;
    }
  }
  std::sort(mapped.begin(), mapped.end());
  const auto last = std::unique(mapped.begin(), mapped.end());
  s.false_positive += static_cast<int>(mapped.end() - last);
  mapped.erase(last, mapped.end());
  s.true_positive = static_cast<int>(mapped.size());
  s.false_negative = reference.edge_count() - s.true_positive;
  return s;
}

GraphScore score_graph(const SkeletonGraph& predicted, const SkeletonGraph& reference, double vertex_tol) {
  return score_edges(predicted.vertices(), predicted.edges(), reference, vertex_tol);
}

} // namespace sketchgraph
