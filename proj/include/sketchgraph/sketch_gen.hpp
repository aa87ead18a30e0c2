#pragma once

#include <cstdint>
#include <random>

#include "sketchgraph/synth2d.hpp"

namespace sketchgraph {

/// Procedural stand-in for Quick-draw drawings: integer coordinates on a
/// 256-unit grid, a few open polylines, closed polygons and single lines per
/// sketch, with segment lengths spread over short and long strokes.
struct SketchGenParams {
  int min_strokes = 1;
  int max_strokes = 8;
  int max_points = 6;
  double min_step = 10.0;
  double max_step = 90.0;
  double min_turn_deg = 30.0;
  double max_turn_deg = 150.0;
};

Sketch generate_raw_sketch(std::mt19937_64& rng, const SketchGenParams& params);

struct DatasetParams {
  SynthParams synth;
  SketchGenParams gen;
  /// Reject sketches whose vertices come closer than island_merge_guard, or
  /// whose vertices pass closer than this to a non-incident edge.
  double min_edge_clearance = 2.0;
  int max_attempts = 1000;
};

/// Sample `index` of the dataset seeded with `master_seed`: draws raw
/// sketches from stream_rng(master_seed, index) until one passes the
/// separation guards, then normalizes and builds its ground truth.
Sample make_dataset_sample(std::uint64_t master_seed, std::uint64_t index, const DatasetParams& params);

} // namespace sketchgraph
