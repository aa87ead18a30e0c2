#include "sketchgraph/graphinfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sketchgraph::infer {

void validate(const InferParams& p) {
  if (!(p.beta > 0.0)) throw Error("infer: beta must be positive");
  if (!(p.tau0 >= 0.0 && p.tau0 <= 1.0)) throw Error("infer: tau must lie in [0, 1]");
  if (!(p.lambda >= 0.0)) throw Error("infer: lambda must be non-negative");
  if (p.i_max < 0) throw Error("infer: i_max must be non-negative");
  if (!(p.render_width >= 1.0)) throw Error("infer: render width must be at least 1");
  if (!(p.vertex_radius >= 0.0)) throw Error("infer: vertex radius must be non-negative");
  if (!(p.dead_zone >= 0.0)) throw Error("infer: dead zone must be non-negative");
  if (p.residual_tolerance_px < 0) throw Error("infer: residual tolerance must be non-negative");
}

// ---------------------------------------------------------------------------

std::vector<Point> extract_vertices(const RasterImage& vertex_mask, double activation_threshold) {
  const int w = vertex_mask.width();
  const int h = vertex_mask.height();
  std::vector<char> on(vertex_mask.size());
  for (std::size_t i = 0; i < on.size(); ++i) on[i] = vertex_mask.data()[i] >= activation_threshold;

  std::vector<Point> centroids;
  std::vector<int> stack;
  for (int start = 0; start < w * h; ++start) {
    if (!on[start]) continue;
    on[start] = 0;
    stack.assign(1, start);
    double sx = 0.0, sy = 0.0;
    long count = 0;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      const int x = idx % w, y = idx / w;
      sx += x;
      sy += y;
      ++count;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const int n = ny * w + nx;
          if (on[n]) {
            on[n] = 0;
            stack.push_back(n);
          }
        }
    }
    centroids.push_back({sx / count, sy / count});
  }
  return centroids;
}

// ---------------------------------------------------------------------------

simd::RoiGeometry make_roi(Point u, Point v, double beta) {
  const Point d = v - u;
  const double len = norm(d);
  if (!(len > 0.0)) throw Error("roi: endpoints coincide");
  return simd::RoiGeometry{u.x, u.y, d.x / len, d.y / len, 0.0, len, beta / 2.0, v.x, v.y, -1.0};
}

simd::RoiSum roi_accumulate(const float* data, int width, int height, const simd::RoiGeometry& roi) {
  const Point u{roi.ux, roi.uy};
  const Point e{roi.ex, roi.ey};
  const Point n{-roi.ey, roi.ex};
  const Point corners[4] = {
      u + roi.t_lo * e + roi.half_width * n,
      u + roi.t_hi * e + roi.half_width * n,
      u + roi.t_hi * e - roi.half_width * n,
      u + roi.t_lo * e - roi.half_width * n,
  };
  double bx0 = corners[0].x, bx1 = corners[0].x, by0 = corners[0].y, by1 = corners[0].y;
  for (const Point& c : corners) {
    bx0 = std::min(bx0, c.x);
    bx1 = std::max(bx1, c.x);
    by0 = std::min(by0, c.y);
    by1 = std::max(by1, c.y);
  }
  const int y0 = std::max(0, static_cast<int>(std::floor(by0)) - 1);
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(by1)) + 1);

  const simd::Kernels& k = simd::active();
  simd::RoiSum total;
  for (int y = y0; y <= y1; ++y) {
    // Crossings of the row with the rectangle outline; the kernel applies the
    // exact predicate, so a one-pixel margin suffices.
    double xa = std::numeric_limits<double>::infinity();
    double xb = -xa;
    for (int i = 0; i < 4; ++i) {
      const Point p = corners[i];
      const Point q = corners[(i + 1) % 4];
      if ((p.y - y) * (q.y - y) > 0.0) continue;
      if (p.y == q.y) {
        xa = std::min({xa, p.x, q.x});
        xb = std::max({xb, p.x, q.x});
      } else {
        const double x = p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
        xa = std::min(xa, x);
        xb = std::max(xb, x);
      }
    }
    if (xa > xb) {
      xa = bx0;
      xb = bx1;
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(xa)) - 1);
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(xb)) + 1);
    if (x0 > x1) continue;
    const simd::RoiSum row = k.roi_row(data + static_cast<std::size_t>(y) * width, x0, x1, static_cast<double>(y), roi);
    total.sum += row.sum;
    total.count += row.count;
  }
  return total;
}

double roi_response(const RasterImage& edge_mask, Point u, Point v, double beta) {
  const simd::RoiSum s = roi_accumulate(edge_mask, make_roi(u, v, beta));
  return s.count > 0 ? s.sum / static_cast<double>(s.count) : 0.0;
}

double half_roi_mean(const SignedImage& residual, Point u, Point v, double beta, double exclusion_radius, bool near_u) {
  simd::RoiGeometry roi = make_roi(u, v, beta);
  const double mid = roi.t_hi / 2.0;
  if (near_u) {
    roi.t_hi = mid;
  } else {
    roi.t_lo = std::nextafter(mid, std::numeric_limits<double>::infinity());
  }
  roi.exclude_r2 = exclusion_radius > 0.0 ? exclusion_radius * exclusion_radius : -1.0;
  const simd::RoiSum s = roi_accumulate(residual, roi);
  return s.count > 0 ? s.sum / static_cast<double>(s.count) : 0.0;
}

int feedback_delta(double residual_u, double residual_v, double dead_zone) {
  const auto snap = [dead_zone](double r) { return std::abs(r) < dead_zone ? 0.0 : r; };
  const double a = snap(residual_u);
  const double b = snap(residual_v);
  if (std::max(a, b) < 0.0) return 1;
  if (std::min(a, b) > 0.0) return -1;
  return 0;
}

// ---------------------------------------------------------------------------

std::vector<Edge> all_pairs(int n) {
  std::vector<Edge> pairs;
  if (n >= 2) pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  return pairs;
}

std::vector<char> pass_through_mask(const std::vector<Point>& vertices, double tol) {
  const int n = static_cast<int>(vertices.size());
  const std::vector<Edge> pairs = all_pairs(n);
  std::vector<char> blocked(pairs.size(), 0);
  if (tol <= 0.0) return blocked;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Point u = vertices[pairs[k].first];
    const Point v = vertices[pairs[k].second];
    const Point d = v - u;
    const double len2 = dot(d, d);
    if (len2 == 0.0) continue;
    for (int w = 0; w < n; ++w) {
      if (w == pairs[k].first || w == pairs[k].second) continue;
      const double t = dot(vertices[w] - u, d) / len2;
      if (t <= 0.0 || t >= 1.0) continue;
      if (std::abs(cross(d, vertices[w] - u)) / std::sqrt(len2) <= tol) {
        blocked[k] = 1;
        break;
      }
    }
  }
  return blocked;
}

std::vector<Edge> naive_edges(const std::vector<Point>& vertices, const RasterImage& edge_mask, double beta, double tau,
                              double pass_through_tol) {
  const std::vector<Edge> pairs = all_pairs(static_cast<int>(vertices.size()));
  const std::vector<char> blocked = pass_through_mask(vertices, pass_through_tol);
  std::vector<Edge> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (blocked[k]) continue;
    if (roi_response(edge_mask, vertices[pairs[k].first], vertices[pairs[k].second], beta) > tau) out.push_back(pairs[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

PairThresholds::PairThresholds(int vertices, double initial)
    : n_(vertices), values_(vertices >= 2 ? static_cast<std::size_t>(vertices) * (vertices - 1) / 2 : 0,
                            std::clamp(initial, 0.0, 1.0)) {}

std::size_t PairThresholds::index_of(int u, int v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) throw Error("pair thresholds: invalid pair");
  if (u > v) std::swap(u, v);
  // Pairs (i, j) with i < u come first: sum over i < u of (n - 1 - i).
  const std::size_t before = static_cast<std::size_t>(u) * (2 * n_ - u - 1) / 2;
  return before + static_cast<std::size_t>(v - u - 1);
}

double PairThresholds::get(int u, int v) const { return values_[index_of(u, v)]; }
void PairThresholds::set(int u, int v, double value) { values_[index_of(u, v)] = std::clamp(value, 0.0, 1.0); }
void PairThresholds::nudge(std::size_t k, double delta) { values_[k] = std::clamp(values_[k] + delta, 0.0, 1.0); }

InferResult feedback_infer(const RasterImage& input, const RasterImage& edge_mask, std::vector<Point> vertices,
                           const InferParams& params) {
  validate(params);
  if (!input.same_shape(edge_mask)) throw Error("feedback_infer: image and masks differ in size");
  InferResult result;
  const int n = static_cast<int>(vertices.size());
  result.graph = SkeletonGraph(std::move(vertices));
  result.thresholds = PairThresholds(n, params.tau0);
  if (n < 2) return result;

  const std::vector<Point>& V = result.graph.vertices();
  const std::vector<Edge> pairs = all_pairs(n);
  const std::vector<char> blocked = pass_through_mask(V, params.pass_through_tol);
  result.responses.resize(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    result.responses[k] = blocked[k] ? 0.0 : roi_response(edge_mask, V[pairs[k].first], V[pairs[k].second], params.beta);

  const auto select = [&] {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (!blocked[k] && result.responses[k] > result.thresholds.at(k)) edges.push_back(pairs[k]);
    return edges;
  };

  std::vector<Edge> current = select();
  result.trace.push_back(current);
  for (int i = 0; i < params.i_max; ++i) {
    std::vector<Stroke> strokes;
    strokes.reserve(current.size());
    for (const Edge& e : current) strokes.push_back(Stroke{{V[e.first], V[e.second]}});
    RasterImage rendered(input.width(), input.height());
    rasterize_into(rendered, strokes, params.render_width);
    const SignedImage res = aligned_residual(input, rendered, params.residual_tolerance_px);

    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (blocked[k]) continue;
      const Point u = V[pairs[k].first];
      const Point v = V[pairs[k].second];
      const double ru = half_roi_mean(res, u, v, params.beta, params.vertex_radius, true);
      const double rv = half_roi_mean(res, u, v, params.beta, params.vertex_radius, false);
      const int delta = feedback_delta(ru, rv, params.dead_zone);
      if (delta != 0) result.thresholds.nudge(k, params.lambda * delta);
    }
    current = select();
    result.trace.push_back(current);
  }
  for (const Edge& e : current) result.graph.add_edge(e.first, e.second);
  return result;
}

InferResult feedback_infer(const RasterImage& input, const LabelMasks& masks, const InferParams& params) {
  if (!input.same_shape(masks.vertex) || !input.same_shape(masks.edge))
    throw Error("feedback_infer: image and masks differ in size");
  return feedback_infer(input, masks.edge, extract_vertices(masks.vertex, params.activation_threshold), params);
}

// ---------------------------------------------------------------------------

void LogHistogram::add(double value) {
  if (!(value > 0.0)) {
    ++underflow;
    return;
  }
  const double pos = (std::log10(value) - log_lo) / (log_hi - log_lo) * bins;
  if (pos < 0.0) {
    ++underflow;
  } else if (pos >= bins) {
    // log10(1) lands exactly on the upper edge; keep it in the last bin.
    if (std::log10(value) <= log_hi) ++counts[bins - 1];
    else ++overflow;
  } else {
    ++counts[static_cast<int>(pos)];
  }
}

int LogHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0) + underflow + overflow; }

bool is_unimodal(const std::vector<int>& counts) {
  if (counts.empty()) return false;
  const auto peak = std::max_element(counts.begin(), counts.end());
  if (*peak == 0) return false;
  for (auto it = counts.begin(); it != peak; ++it)
    if (*it > *(it + 1)) return false;
  for (auto it = peak; it + 1 != counts.end(); ++it)
    if (*(it + 1) > *it) return false;
  return true;
}

PremiseRecord premise_record(const RasterImage& edge_mask, const std::vector<Point>& vertices, int edge_count,
                             double beta) {
  const int n = static_cast<int>(vertices.size());
  if (n < 2 || edge_count < 1) throw Error("premise: need at least two vertices and one edge");
  std::vector<double> eta;
  for (const Edge& p : all_pairs(n)) eta.push_back(roi_response(edge_mask, vertices[p.first], vertices[p.second], beta));
  if (static_cast<std::size_t>(edge_count) > eta.size()) throw Error("premise: more edges than vertex pairs");
  const double mean = std::accumulate(eta.begin(), eta.end(), 0.0) / static_cast<double>(eta.size());
  std::sort(eta.begin(), eta.end(), std::greater<>());
  PremiseRecord r;
  r.tau_hat = eta[edge_count - 1];
  r.gap_hat = r.tau_hat - mean;
  return r;
}

PremiseAccumulator::PremiseAccumulator(std::vector<double> betas, LogHistogram shape) {
  stats_.betas = std::move(betas);
  stats_.records.resize(stats_.betas.size());
  stats_.tau_histograms.assign(stats_.betas.size(), LogHistogram(shape.log_lo, shape.log_hi, shape.bins));
  stats_.gap_histograms = stats_.tau_histograms;
}

void PremiseAccumulator::add(const Sample& sample) {
  if (sample.graph.vertex_count() < 2 || sample.graph.edge_count() < 1) {
    ++stats_.skipped;
    return;
  }
  for (std::size_t b = 0; b < stats_.betas.size(); ++b) {
    const PremiseRecord r =
        premise_record(sample.masks.edge, sample.graph.vertices(), sample.graph.edge_count(), stats_.betas[b]);
    stats_.records[b].push_back(r);
    stats_.tau_histograms[b].add(r.tau_hat);
    stats_.gap_histograms[b].add(r.gap_hat);
  }
}

PremiseStats premise_stats(const std::vector<Sample>& samples, const std::vector<double>& betas) {
  PremiseAccumulator acc(betas);
  for (const Sample& s : samples) acc.add(s);
  return acc.stats();
}

} // namespace sketchgraph::infer
