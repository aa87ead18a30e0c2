#include "sketchgraph/toolpath.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace sketchgraph::toolpath {

StrokeSequence strokes_from_graph(const SkeletonGraph& graph) {
  const int n = graph.vertex_count();
  std::vector<std::set<int>> adj(n);
  for (const Edge& e : graph.edges()) {
    adj[e.first].insert(e.second);
    adj[e.second].insert(e.first);
  }
  const auto pop_edge = [&](int a, int b) {
    adj[a].erase(b);
    adj[b].erase(a);
  };

  StrokeSequence seq;
  // Adjacency lists only ever shrink, so the start cursor never moves back.
  int start = 0;
  while (true) {
    while (start < n && adj[start].empty()) ++start;
    if (start == n) break;
    std::vector<int> stroke{start};
    int cur = start;
    while (!adj[cur].empty()) {
      const int next = *adj[cur].begin();
      pop_edge(cur, next);
      stroke.push_back(next);
      cur = next;
    }
    seq.strokes.push_back(std::move(stroke));
  }
  return seq;
}

PlateTransform fit_to_plate(const BBox& bbox, double plate, double origin) {
  if (!(plate > 0.0)) throw Error("plate size must be positive");
  const double extent = std::max(bbox.width(), bbox.height());
  PlateTransform t;
  t.scale = extent > 0.0 ? plate / extent : 1.0;
  const double center = origin + plate / 2.0;
  t.offset_x = center - t.scale * (bbox.min.x + bbox.max.x) / 2.0;
  t.offset_y = center - t.scale * (bbox.min.y + bbox.max.y) / 2.0;
  return t;
}

namespace {

const Point& vertex_at(const std::vector<Point>& vertices, int id) {
  if (id < 0 || id >= static_cast<int>(vertices.size()))
    throw Error("stroke references invalid vertex id " + std::to_string(id));
  return vertices[id];
}

std::string xy_line(Point p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "X%.2f Y%.2f\n", p.x, p.y);
  return buf;
}

// Up to three decimals, trailing zeros dropped.
std::string svg_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

} // namespace

std::string emit_gcode(const StrokeSequence& seq, const std::vector<Point>& vertices, const PlateTransform& transform) {
  std::string out = "G00 Z-5\n";
  for (const auto& stroke : seq.strokes) {
    if (stroke.empty()) continue;
    out += xy_line(transform.apply(vertex_at(vertices, stroke.front())));
    out += "G01 Z0\n";
    for (std::size_t i = 1; i < stroke.size(); ++i) out += xy_line(transform.apply(vertex_at(vertices, stroke[i])));
    out += "G00 Z-5\n";
  }
  return out;
}

std::string emit_svg(const StrokeSequence& seq, const std::vector<Point>& vertices, int canvas_size) {
  const std::string size = std::to_string(canvas_size);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size + "\" viewBox=\"0 0 " +
         size + " " + size + "\">\n";
  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"1\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  for (const auto& stroke : seq.strokes) {
    if (stroke.empty()) continue;
    std::string d;
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      const Point& p = vertex_at(vertices, stroke[i]);
      d += (i == 0 ? "M " : " L ") + svg_number(p.x) + " " + svg_number(p.y);
    }
    out += "<path d=\"" + d + "\" />\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string strokes_to_json(const StrokeSequence& seq) {
  nlohmann::json j;
  j["strokes"] = seq.strokes;
  return j.dump() + "\n";
}

StrokeSequence strokes_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    StrokeSequence seq;
    seq.strokes = j.at("strokes").get<std::vector<std::vector<int>>>();
    return seq;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("strokes JSON: ") + e.what());
  }
}

} // namespace sketchgraph::toolpath
