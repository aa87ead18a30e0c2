#pragma once

#include <vector>

#include "sketchgraph/graph.hpp"
#include "sketchgraph/raster.hpp"
#include "sketchgraph/simd/kernels.hpp"
#include "sketchgraph/synth2d.hpp"

namespace sketchgraph::infer {

struct InferParams {
  double beta = 1.8;           // ROI width, px
  double tau0 = 0.35;          // initial plausibility threshold
  double lambda = 0.05;        // threshold update step
  int i_max = 10;              // number of feedback updates
  double render_width = 2.0;   // stroke width used to render the current graph
  double vertex_radius = 3.0;  // vertex disks excluded from the residual halves
  double activation_threshold = 0.5;
  double dead_zone = 0.05;     // |mean residual| below this counts as zero
  /// Pairs whose chord passes within this distance of a third vertex lying
  /// strictly between them are never proposed. <= 0 disables the rule.
  double pass_through_tol = 1.0;
  /// Ink offset (px) tolerated between input and rendered graph before it
  /// counts as missing or extra. 0 uses the plain difference.
  int residual_tolerance_px = 1;

  friend bool operator==(const InferParams&, const InferParams&) = default;
};

void validate(const InferParams& p);

/// Centroids of the 8-connected components of (mask >= threshold), in the
/// raster order of each component's first pixel.
std::vector<Point> extract_vertices(const RasterImage& vertex_mask, double activation_threshold = 0.5);

// ---------------------------------------------------------------------------
// ROI statistics

/// Pixels whose centers satisfy the rectangle predicate of simd::RoiGeometry.
simd::RoiGeometry make_roi(Point u, Point v, double beta);

/// Sum and count of the plane over the ROI. Only rows and columns that can
/// contain member pixels are visited; membership is decided by the kernel.
simd::RoiSum roi_accumulate(const float* data, int width, int height, const simd::RoiGeometry& roi);

template <class Plane>
simd::RoiSum roi_accumulate(const Plane& plane, const simd::RoiGeometry& roi) {
  return roi_accumulate(plane.data().data(), plane.width(), plane.height(), roi);
}

/// Mean edge-mask value over the rectangle of length |uv| and width beta
/// centered on segment (u, v); 0 if it contains no pixel center.
double roi_response(const RasterImage& edge_mask, Point u, Point v, double beta);

/// Mean residual over the half of ROI(u, v) nearer u (near_u) or nearer v,
/// excluding pixels within exclusion_radius of u or v.
double half_roi_mean(const SignedImage& residual, Point u, Point v, double beta, double exclusion_radius, bool near_u);

/// Threshold update direction from the two half-ROI residual means:
/// +1 if both negative, -1 if both positive, else 0, after zeroing values
/// with magnitude below dead_zone.
int feedback_delta(double residual_u, double residual_v, double dead_zone);

// ---------------------------------------------------------------------------
// Edge inference

/// All unordered vertex pairs (i < j) in lexicographic order.
std::vector<Edge> all_pairs(int n);

/// Pairs (i < j) excluded by the pass-through rule.
std::vector<char> pass_through_mask(const std::vector<Point>& vertices, double tol);

/// Pairs with roi_response > tau.
std::vector<Edge> naive_edges(const std::vector<Point>& vertices, const RasterImage& edge_mask, double beta, double tau,
                              double pass_through_tol = 0.0);

/// Per-pair thresholds, indexed like all_pairs(n), kept in [0, 1].
class PairThresholds {
public:
  PairThresholds() = default;
  PairThresholds(int vertices, double initial);

  double get(int u, int v) const;
  void set(int u, int v, double value);
  void nudge(std::size_t pair_index, double delta);
  double at(std::size_t pair_index) const { return values_[pair_index]; }
  std::size_t size() const { return values_.size(); }
  std::size_t index_of(int u, int v) const;

private:
  int n_ = 0;
  std::vector<double> values_;
};

struct InferResult {
  SkeletonGraph graph;
  /// Edge set after each step: trace[0] is the naive graph, trace[i] the
  /// graph after i updates. Size i_max + 1 when there are >= 2 vertices.
  std::vector<std::vector<Edge>> trace;
  PairThresholds thresholds;
  std::vector<double> responses;  // roi_response per pair, all_pairs order
};

/// Vertices from the vertex mask; edges by thresholding per-pair ROI
/// responses, with thresholds moved by lambda per step according to the
/// residual between the input and the rendered current graph.
InferResult feedback_infer(const RasterImage& input, const LabelMasks& masks, const InferParams& params);

/// Same loop with a given vertex set.
InferResult feedback_infer(const RasterImage& input, const RasterImage& edge_mask, std::vector<Point> vertices,
                           const InferParams& params);

// ---------------------------------------------------------------------------
// Threshold premise statistics

/// Histogram over log10(value) in [log_lo, log_hi) with equal-width bins.
/// Non-positive values and values below the range count as underflow.
struct LogHistogram {
  double log_lo = -2.0;
  double log_hi = 0.0;
  int bins = 20;
  std::vector<int> counts;
  int underflow = 0;
  int overflow = 0;

  LogHistogram() : counts(bins, 0) {}
  LogHistogram(double lo, double hi, int n) : log_lo(lo), log_hi(hi), bins(n), counts(n, 0) {}
  void add(double value);
  int total() const;
};

/// True when bin counts rise (non-strictly) to a single maximum and then
/// fall (non-strictly): exactly one peak.
bool is_unimodal(const std::vector<int>& counts);

struct PremiseRecord {
  double tau_hat = 0.0;  // m-th largest pair response
  double gap_hat = 0.0;  // tau_hat minus mean response over all pairs
};

struct PremiseStats {
  std::vector<double> betas;
  std::vector<std::vector<PremiseRecord>> records;  // [beta][sample]
  std::vector<LogHistogram> tau_histograms;
  std::vector<LogHistogram> gap_histograms;
  int skipped = 0;  // samples with < 2 vertices or no edges
};

/// Streaming accumulator so large sample sets need not be held in memory.
class PremiseAccumulator {
public:
  explicit PremiseAccumulator(std::vector<double> betas, LogHistogram shape = {});
  /// Uses the ground-truth edge mask, vertex set and edge count of the sample.
  void add(const Sample& sample);
  const PremiseStats& stats() const { return stats_; }

private:
  PremiseStats stats_;
};

PremiseStats premise_stats(const std::vector<Sample>& samples, const std::vector<double>& betas);

/// tau_hat / gap_hat for one graph and edge mask.
PremiseRecord premise_record(const RasterImage& edge_mask, const std::vector<Point>& vertices, int edge_count,
                             double beta);

} // namespace sketchgraph::infer
