#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sketchgraph/graph.hpp"
#include "sketchgraph/raster.hpp"

namespace sketchgraph {

/// Per-pixel class planes. For ground truth the channels are binary and
/// partition the canvas: vertex + edge + background = 1 everywhere.
struct LabelMasks {
  RasterImage vertex;
  RasterImage edge;
  RasterImage background;
  int size = 0;

  friend bool operator==(const LabelMasks&, const LabelMasks&) = default;
};

struct Sample {
  Sketch sketch;
  RasterImage image;
  LabelMasks masks;
  SkeletonGraph graph;
  std::uint64_t seed = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct SynthParams {
  int size = 256;
  double stroke_width = 2.0;
  double vertex_radius = 3.0;
  double margin = 8.0;
  double merge_radius = 1.0;
  double eps = 1e-6;

  friend bool operator==(const SynthParams&, const SynthParams&) = default;
};

// ---------------------------------------------------------------------------
// Ingestion

struct NdjsonResult {
  std::vector<Sketch> sketches;
  int skipped_strokes = 0;   // strokes with no points
  int skipped_sketches = 0;  // lines whose drawing had no usable stroke
};

/// One JSON object per line with "drawing": [[xs...], [ys...]] per stroke
/// (extra per-stroke arrays such as timestamps are ignored). Blank lines are
/// skipped. Throws Error naming the 1-based line on malformed input.
NdjsonResult parse_sketch_ndjson(std::string_view text);

/// Inverse of parse_sketch_ndjson for a single sketch (one line, no newline).
std::string sketch_to_ndjson(const Sketch& sketch);

/// Uniformly rescales so the bounding box fits (size - 2 margin)^2 and
/// centers it at (size/2, size/2). A sketch whose points all coincide is
/// moved to the canvas center with scale 1.
Sketch normalize_sketch(const Sketch& sketch, int size, double margin);

// ---------------------------------------------------------------------------
// Ground truth

/// Graph vertices are every stroke breakpoint plus every segment contact
/// from find_intersections, merged within params.merge_radius; edges are the
/// stroke segments split at those points. Masks: vertex = disks of
/// vertex_radius, edge = clamp(I - vertex), background = 1 - edge - vertex.
Sample build_ground_truth(const Sketch& sketch, const SynthParams& params);

/// Masks for a given image and vertex set.
LabelMasks make_masks(const RasterImage& image, const std::vector<Point>& vertices, double vertex_radius);

/// Smallest distance between two vertices (infinity for fewer than two).
double min_vertex_spacing(const SkeletonGraph& g);

/// Vertex separation at which disks of radius r can no longer be 8-adjacent.
double island_merge_guard(double vertex_radius);

/// Smallest distance from a vertex to an edge not incident to it.
double min_vertex_edge_clearance(const SkeletonGraph& g);

// ---------------------------------------------------------------------------
// Augmentation

/// Fractions of the canvas (translate, scale) or of a full turn (rotate);
/// each must lie in the open interval (-1/20, 1/20).
struct AugmentParams {
  double translate_x = 0.0;
  double translate_y = 0.0;
  bool flip = false;
  double rotate = 0.0;
  double scale = 0.0;
};

bool within_bounds(const AugmentParams& p);
AugmentParams sample_augment_params(std::mt19937_64& rng);

/// Applies scale and rotation about the canvas center, then a horizontal flip
/// (x -> size - 1 - x), then translation, to the sketch and graph, and
/// re-rasterizes image and masks. Returns nullopt if any point leaves the
/// canvas. Throws Error if params are out of bounds.
std::optional<Sample> augment(const Sample& sample, const AugmentParams& params, const SynthParams& synth);

/// Draws params from rng, retrying up to 8 times while the result leaves the
/// canvas. nullopt means the sample should be skipped.
std::optional<Sample> augment_random(const Sample& sample, std::mt19937_64& rng, const SynthParams& synth);

// ---------------------------------------------------------------------------
// Mask degradation

struct DegradeParams {
  double drop_rate = 0.0;
  int dilate_vertices_px = 0;
  double salt_rate = 0.0;

  friend bool operator==(const DegradeParams&, const DegradeParams&) = default;
};

/// Drops edge pixels with probability drop_rate, dilates vertex islands by
/// a disk of the given radius, sets edge pixels on with probability
/// salt_rate, and recomputes background = clamp(1 - edge - vertex).
LabelMasks degrade_masks(const LabelMasks& masks, const DegradeParams& params, std::uint64_t seed);

/// Parses "drop=F,dilate=N,salt=F" (any subset, any order).
DegradeParams parse_degrade_spec(std::string_view spec);

// ---------------------------------------------------------------------------

/// Independent generator for stream `index` of a run seeded with `master`.
std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t index);

} // namespace sketchgraph
