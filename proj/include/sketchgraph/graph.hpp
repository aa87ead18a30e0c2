#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph {

using Edge = std::pair<int, int>;

/// Undirected graph with sub-pixel vertex positions. Edges are stored as
/// (min, max) pairs, sorted, without duplicates or self-loops.
class SkeletonGraph {
public:
  SkeletonGraph() = default;
  explicit SkeletonGraph(std::vector<Point> vertices) : vertices_(std::move(vertices)) {}
  SkeletonGraph(std::vector<Point> vertices, const std::vector<Edge>& edges);

  int add_vertex(Point p);
  /// Adds (u, v) unless it is a self-loop or already present. Returns true if added.
  bool add_edge(int u, int v);
  bool has_edge(int u, int v) const;

  const std::vector<Point>& vertices() const { return vertices_; }
  std::vector<Point>& vertices() { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  friend bool operator==(const SkeletonGraph&, const SkeletonGraph&) = default;

private:
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
};

Edge make_edge(int u, int v);

/// {"vertices": [[x,y],...], "edges": [[i,j],...]}
std::string graph_to_json(const SkeletonGraph& g);
SkeletonGraph graph_from_json(const std::string& text);

} // namespace sketchgraph
