#pragma once

#include <vector>

#include "sketchgraph/graph.hpp"

namespace sketchgraph {

/// One-to-one assignment of predicted to reference vertices, greedy by
/// increasing distance, accepting pairs within tol. Entry i is the matched
/// reference id of predicted vertex i, or -1.
std::vector<int> match_vertices(const std::vector<Point>& predicted, const std::vector<Point>& reference, double tol);

struct GraphScore {
  int true_positive = 0;
  int false_positive = 0;
  int false_negative = 0;
  int matched_vertices = 0;
  int reference_vertices = 0;
  double max_vertex_error = 0.0;  // over matched vertices

  double precision() const;
  double recall() const;
  double f1() const;
  bool all_vertices_matched() const { return matched_vertices == reference_vertices; }
};

/// Edge precision/recall/F1 of `predicted` against `reference` after vertex
/// matching; an edge counts as correct only if both endpoints are matched
/// and the mapped pair is a reference edge.
GraphScore score_graph(const SkeletonGraph& predicted, const SkeletonGraph& reference, double vertex_tol = 1.0);

/// Same, for an alternative edge set over the vertices of `predicted`.
GraphScore score_edges(const std::vector<Point>& predicted_vertices, const std::vector<Edge>& predicted_edges,
                       const SkeletonGraph& reference, double vertex_tol = 1.0);

} // namespace sketchgraph
