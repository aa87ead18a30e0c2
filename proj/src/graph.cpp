#include "sketchgraph/graph.hpp"

#include <algorithm>

#include <json.hpp>

namespace sketchgraph {

Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

SkeletonGraph::SkeletonGraph(std::vector<Point> vertices, const std::vector<Edge>& edges)
    : vertices_(std::move(vertices)) {
  for (const Edge& e : edges) add_edge(e.first, e.second);
}

int SkeletonGraph::add_vertex(Point p) {
  vertices_.push_back(p);
  return vertex_count() - 1;
}

bool SkeletonGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw Error("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references an unknown vertex");
  if (u == v) return false;
  const Edge e = make_edge(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it != edges_.end() && *it == e) return false;
  edges_.insert(it, e);
  return true;
}

bool SkeletonGraph::has_edge(int u, int v) const {
  return std::binary_search(edges_.begin(), edges_.end(), make_edge(u, v));
}

std::string graph_to_json(const SkeletonGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::json::array();
  for (const Point& p : g.vertices()) j["vertices"].push_back({p.x, p.y});
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) j["edges"].push_back({e.first, e.second});
  return j.dump() + "\n";
}

SkeletonGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("graph JSON: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("edges")) throw Error("graph JSON: missing \"vertices\" or \"edges\"");
  SkeletonGraph g;
  try {
    for (const auto& v : j.at("vertices")) g.add_vertex({v.at(0).get<double>(), v.at(1).get<double>()});
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("graph JSON: ") + e.what());
  }
  return g;
}

} // namespace sketchgraph
