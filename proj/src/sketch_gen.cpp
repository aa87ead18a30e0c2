#include "sketchgraph/sketch_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sketchgraph {

namespace {

constexpr double kGrid = 255.0;

Point snap(Point p) {
  return {std::clamp(std::round(p.x), 0.0, kGrid), std::clamp(std::round(p.y), 0.0, kGrid)};
}

Stroke polyline(std::mt19937_64& rng, const SketchGenParams& gp, int points) {
  std::uniform_real_distribution<double> pos(20.0, kGrid - 20.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> log_step(std::log(gp.min_step), std::log(gp.max_step));
  std::uniform_real_distribution<double> turn(gp.min_turn_deg, gp.max_turn_deg);
  std::bernoulli_distribution left(0.5);

  Stroke s;
  Point p{pos(rng), pos(rng)};
  double heading = angle(rng);
  s.points.push_back(snap(p));
  for (int i = 1; i < points; ++i) {
    if (i > 1) heading += (left(rng) ? 1.0 : -1.0) * turn(rng) * std::numbers::pi / 180.0;
    const double step = std::exp(log_step(rng));
    p = p + step * Point{std::cos(heading), std::sin(heading)};
    if (p.x < 0.0 || p.x > kGrid || p.y < 0.0 || p.y > kGrid) {
      p = snap(p);
      heading += std::numbers::pi;
    }
    s.points.push_back(snap(p));
  }
  return dedupe_consecutive(std::move(s));
}

Stroke polygon(std::mt19937_64& rng, int corners) {
  std::uniform_real_distribution<double> pos(60.0, kGrid - 60.0);
  std::uniform_real_distribution<double> radius(15.0, 60.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  const Point c{pos(rng), pos(rng)};
  const double r = radius(rng);
  const double start = phase(rng);
  Stroke s;
  for (int i = 0; i < corners; ++i) {
    const double a = start + (i + jitter(rng)) * 2.0 * std::numbers::pi / corners;
    s.points.push_back(snap(c + r * Point{std::cos(a), std::sin(a)}));
  }
  s.points.push_back(s.points.front());
  return dedupe_consecutive(std::move(s));
}

} // namespace

Sketch generate_raw_sketch(std::mt19937_64& rng, const SketchGenParams& params) {
  std::uniform_int_distribution<int> stroke_count(params.min_strokes, params.max_strokes);
  std::uniform_int_distribution<int> point_count(2, std::max(2, params.max_points));
  std::uniform_int_distribution<int> corner_count(3, 6);
  std::discrete_distribution<int> kind({6.0, 2.5, 1.5});  // polyline, polygon, single line

  Sketch sketch;
  sketch.canvas_size = 256;
  const int n = stroke_count(rng);
  for (int i = 0; i < n; ++i) {
    Stroke s;
    switch (kind(rng)) {
    case 0: s = polyline(rng, params, point_count(rng)); break;
    case 1: s = polygon(rng, corner_count(rng)); break;
    default: s = polyline(rng, params, 2); break;
    }
    if (!s.points.empty()) sketch.strokes.push_back(std::move(s));
  }
  return sketch;
}

Sample make_dataset_sample(std::uint64_t master_seed, std::uint64_t index, const DatasetParams& params) {
  std::mt19937_64 rng = stream_rng(master_seed, index);
  const double guard = island_merge_guard(params.synth.vertex_radius);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    Sketch raw = generate_raw_sketch(rng, params.gen);
    if (raw.strokes.empty()) continue;
    const Sketch norm = normalize_sketch(raw, params.synth.size, params.synth.margin);
    Sample s = build_ground_truth(norm, params.synth);
    if (s.graph.edge_count() == 0) continue;
    if (min_vertex_spacing(s.graph) <= guard) continue;
    if (min_vertex_edge_clearance(s.graph) <= params.min_edge_clearance) continue;
    s.seed = rng();
    s.sketch.canvas_size = params.synth.size;
    return s;
  }
  throw Error("make_dataset_sample: no sketch passed the separation guards for index " + std::to_string(index));
}

} // namespace sketchgraph
