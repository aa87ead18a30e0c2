#include "sketchgraph/synth2d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "sketchgraph/intersect.hpp"

namespace sketchgraph {

// ---------------------------------------------------------------------------
// Ingestion

NdjsonResult parse_sketch_ndjson(std::string_view text) {
  NdjsonResult result;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error("ndjson " + where + ": malformed JSON");
    }
    if (!j.is_object() || !j.contains("drawing") || !j["drawing"].is_array())
      throw Error("ndjson " + where + ": missing \"drawing\" array");

    Sketch sketch;
    try {
      for (const auto& stroke : j["drawing"]) {
        if (!stroke.is_array() || stroke.size() < 2) throw Error("ndjson " + where + ": stroke must be [[xs], [ys]]");
        const auto& xs = stroke[0];
        const auto& ys = stroke[1];
        if (!xs.is_array() || !ys.is_array() || xs.size() != ys.size())
          throw Error("ndjson " + where + ": stroke x/y arrays differ in length");
        Stroke s;
        for (std::size_t i = 0; i < xs.size(); ++i) s.points.push_back({xs[i].get<double>(), ys[i].get<double>()});
        s = dedupe_consecutive(std::move(s));
        if (s.points.empty()) {
          ++result.skipped_strokes;
          continue;
        }
        sketch.strokes.push_back(std::move(s));
      }
    } catch (const nlohmann::json::exception&) {
      throw Error("ndjson " + where + ": non-numeric coordinate");
    }
    if (!all_finite(sketch.strokes)) throw Error("ndjson " + where + ": non-finite coordinate");
    if (sketch.strokes.empty()) {
      ++result.skipped_sketches;
      continue;
    }
    result.sketches.push_back(std::move(sketch));
  }
  return result;
}

std::string sketch_to_ndjson(const Sketch& sketch) {
  nlohmann::ordered_json drawing = nlohmann::json::array();
  for (const Stroke& s : sketch.strokes) {
    nlohmann::json xs = nlohmann::json::array();
    nlohmann::json ys = nlohmann::json::array();
    for (const Point& p : s.points) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    drawing.push_back({xs, ys});
  }
  nlohmann::ordered_json j;
  j["drawing"] = drawing;
  return j.dump();
}

Sketch normalize_sketch(const Sketch& sketch, int size, double margin) {
  if (sketch.strokes.empty()) throw Error("normalize_sketch: empty sketch");
  if (!(2.0 * margin < size)) throw Error("normalize_sketch: margin too large for canvas");
  const BBox box = bounding_box(sketch.strokes);
  const double extent = std::max(box.width(), box.height());
  const Point center{(box.min.x + box.max.x) / 2.0, (box.min.y + box.max.y) / 2.0};
  const Point target{size / 2.0, size / 2.0};
  const double scale = extent > 0.0 ? (size - 2.0 * margin) / extent : 1.0;

  Sketch out;
  out.canvas_size = size;
  for (const Stroke& s : sketch.strokes) {
    Stroke t;
    for (const Point& p : s.points) t.points.push_back(target + scale * (p - center));
    out.strokes.push_back(dedupe_consecutive(std::move(t)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth

namespace {

class VertexPool {
public:
  VertexPool(SkeletonGraph& g, double radius) : g_(g), radius_(radius) {}

  int intern(Point p) {
    for (int i = 0; i < g_.vertex_count(); ++i)
      if (distance(g_.vertices()[i], p) <= radius_) return i;
    return g_.add_vertex(p);
  }

private:
  SkeletonGraph& g_;
  double radius_;
};

double segment_param(const Segment& s, Point p) {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  return len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
}

} // namespace

LabelMasks make_masks(const RasterImage& image, const std::vector<Point>& vertices, double vertex_radius) {
  LabelMasks m;
  m.size = image.width();
  m.vertex = rasterize_disks(vertices, image.width(), vertex_radius);
  m.edge = subtract_clamped(image, m.vertex);
  m.background = complement_sum(m.edge, m.vertex);
  return m;
}

Sample build_ground_truth(const Sketch& sketch, const SynthParams& params) {
  Sample sample;
  sample.sketch = sketch;
  sample.sketch.canvas_size = params.size;
  sample.image = rasterize(sketch.strokes, params.size, params.stroke_width);

  SkeletonGraph& g = sample.graph;
  VertexPool pool(g, params.merge_radius);

  std::vector<Segment> segments;
  std::vector<std::pair<int, int>> segment_ends;
  for (const Stroke& s : sketch.strokes) {
    int prev = pool.intern(s.points.front());
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      const int cur = pool.intern(s.points[i]);
      segments.push_back({s.points[i - 1], s.points[i]});
      segment_ends.push_back({prev, cur});
      prev = cur;
    }
  }

  // (param along segment, vertex id) for every split point.
  std::vector<std::vector<std::pair<double, int>>> splits(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    splits[k].push_back({0.0, segment_ends[k].first});
    splits[k].push_back({1.0, segment_ends[k].second});
  }
  for (const Intersection& x : find_intersections(segments, params.eps)) {
    const int id = pool.intern(x.point);
    splits[x.first].push_back({segment_param(segments[x.first], x.point), id});
    splits[x.second].push_back({segment_param(segments[x.second], x.point), id});
  }
  for (auto& pts : splits) {
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < pts.size(); ++i) g.add_edge(pts[i - 1].second, pts[i].second);
  }

  sample.masks = make_masks(sample.image, g.vertices(), params.vertex_radius);
  return sample;
}

double min_vertex_spacing(const SkeletonGraph& g) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = g.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::min(best, distance(v[i], v[j]));
  return best;
}

double island_merge_guard(double vertex_radius) { return 2.0 * vertex_radius + std::numbers::sqrt2; }

double min_vertex_edge_clearance(const SkeletonGraph& g) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = g.vertices();
  for (const Edge& e : g.edges())
    for (int w = 0; w < g.vertex_count(); ++w) {
      if (w == e.first || w == e.second) continue;
      best = std::min(best, distance_to_segment(v[w], v[e.first], v[e.second]));
    }
  return best;
}

// ---------------------------------------------------------------------------
// Augmentation

namespace {

constexpr double kAugmentBound = 1.0 / 20.0;

bool open_bound(double v) { return v > -kAugmentBound && v < kAugmentBound; }

struct Similarity {
  const AugmentParams& p;
  int size;

  Point operator()(Point q) const {
    const Point c{size / 2.0, size / 2.0};
    if (p.scale != 0.0) q = c + (1.0 + p.scale) * (q - c);
    if (p.rotate != 0.0) {
      const double a = p.rotate * 2.0 * std::numbers::pi;
      const double ca = std::cos(a), sa = std::sin(a);
      const Point r = q - c;
      q = c + Point{ca * r.x - sa * r.y, sa * r.x + ca * r.y};
    }
    if (p.flip) q.x = (size - 1) - q.x;
    if (p.translate_x != 0.0) q.x += p.translate_x * size;
    if (p.translate_y != 0.0) q.y += p.translate_y * size;
    return q;
  }
};

bool inside(Point p, int size) { return p.x >= 0.0 && p.y >= 0.0 && p.x < size && p.y < size; }

} // namespace

bool within_bounds(const AugmentParams& p) {
  return open_bound(p.translate_x) && open_bound(p.translate_y) && open_bound(p.rotate) && open_bound(p.scale);
}

AugmentParams sample_augment_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(std::nextafter(-kAugmentBound, 0.0), kAugmentBound);
  std::bernoulli_distribution coin(0.5);
  AugmentParams p;
  p.translate_x = u(rng);
  p.translate_y = u(rng);
  p.flip = coin(rng);
  p.rotate = u(rng);
  p.scale = u(rng);
  return p;
}

std::optional<Sample> augment(const Sample& sample, const AugmentParams& params, const SynthParams& synth) {
  if (!within_bounds(params)) throw Error("augment: parameters outside (-1/20, 1/20)");
  const int size = sample.image.width();
  const Similarity xf{params, size};

  Sample out;
  out.seed = sample.seed;
  out.sketch.canvas_size = sample.sketch.canvas_size;
  for (const Stroke& s : sample.sketch.strokes) {
    Stroke t;
    for (const Point& p : s.points) {
      const Point q = xf(p);
      if (!inside(q, size)) return std::nullopt;
      t.points.push_back(q);
    }
    out.sketch.strokes.push_back(std::move(t));
  }
  std::vector<Point> verts;
  for (const Point& p : sample.graph.vertices()) {
    const Point q = xf(p);
    if (!inside(q, size)) return std::nullopt;
    verts.push_back(q);
  }
  out.graph = SkeletonGraph(std::move(verts), sample.graph.edges());
  out.image = rasterize(out.sketch.strokes, size, synth.stroke_width);
  out.masks = make_masks(out.image, out.graph.vertices(), synth.vertex_radius);
  return out;
}

std::optional<Sample> augment_random(const Sample& sample, std::mt19937_64& rng, const SynthParams& synth) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (auto out = augment(sample, sample_augment_params(rng), synth)) return out;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Degradation

LabelMasks degrade_masks(const LabelMasks& masks, const DegradeParams& params, std::uint64_t seed) {
  if (params.drop_rate < 0.0 || params.drop_rate > 1.0 || params.salt_rate < 0.0 || params.salt_rate > 1.0)
    throw Error("degrade_masks: rates must lie in [0, 1]");
  if (params.dilate_vertices_px < 0) throw Error("degrade_masks: dilation must be non-negative");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  LabelMasks out = masks;

  if (params.drop_rate > 0.0)
    for (float& e : out.edge.data())
      if (e > 0.0f && u01(rng) < params.drop_rate) e = 0.0f;

  if (params.dilate_vertices_px > 0) out.vertex = dilate_disk(masks.vertex, params.dilate_vertices_px);

  if (params.salt_rate > 0.0)
    for (float& e : out.edge.data())
      if (u01(rng) < params.salt_rate) e = 1.0f;

  out.background = complement_sum(out.edge, out.vertex);
  return out;
}

DegradeParams parse_degrade_spec(std::string_view spec) {
  DegradeParams p;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view item = spec.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("degrade: expected key=value, got '" + std::string(item) + "'");
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    try {
      std::size_t used = 0;
      if (key == "drop") {
        p.drop_rate = std::stod(value, &used);
      } else if (key == "salt") {
        p.salt_rate = std::stod(value, &used);
      } else if (key == "dilate") {
        p.dilate_vertices_px = std::stoi(value, &used);
      } else {
        throw Error("degrade: unknown key '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw Error("degrade: bad value for '" + key + "'");
    }
  }
  return p;
}

std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5ce7u};
  return std::mt19937_64(seq);
}

} // namespace sketchgraph
