#include "sketchgraph/pipeline.hpp"

#include <chrono>

#include <json.hpp>

#include "sketchgraph/atomic_file.hpp"
#include "sketchgraph/graphinfer.hpp"
#include "sketchgraph/metrics.hpp"
#include "sketchgraph/png_io.hpp"
#include "sketchgraph/sketch_gen.hpp"
#include "sketchgraph/toolpath.hpp"

namespace sketchgraph {

using nlohmann::ordered_json;

void save_masks_png(const std::filesystem::path& path, const LabelMasks& masks) {
  save_png_rgb(path, masks.vertex, masks.edge, masks.background);
}

LabelMasks load_masks_png(const std::filesystem::path& path) {
  auto [r, g, b] = load_png_rgb(path);
  LabelMasks m;
  m.size = r.width();
  m.vertex = std::move(r);
  m.edge = std::move(g);
  m.background = std::move(b);
  return m;
}

void write_sample(const std::filesystem::path& dir, const std::string& id, const Sample& sample) {
  save_png_gray(dir / (id + "_input.png"), sample.image);
  save_masks_png(dir / (id + "_masks.png"), sample.masks);
  write_file_atomic(dir / (id + "_graph.json"), graph_to_json(sample.graph));
}

namespace {

class StageClock {
public:
  explicit StageClock(bool enabled) : enabled_(enabled), timings_(ordered_json::object()) {}

  template <class F>
  auto run(const char* stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto result = f();
        record(stage, t0);
        return result;
      }
    } catch (const FileNotFound&) {
      throw;
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }

  const ordered_json& timings() const { return timings_; }
  bool enabled() const { return enabled_; }

private:
  void record(const char* stage, std::chrono::steady_clock::time_point t0) {
    if (!enabled_) return;
    timings_[stage] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }

  bool enabled_;
  ordered_json timings_;
};

Sample load_sample(const PipelineConfig& config, const PipelineOptions& options) {
  if (options.sketch_index < 0) throw Error("sketch index must be non-negative");
  if (config.input.empty()) {
    DatasetParams params;
    params.synth = config.synth;
    return make_dataset_sample(config.seed, static_cast<std::uint64_t>(options.sketch_index), params);
  }
  const std::string text = read_file(config.input);
  const NdjsonResult parsed = parse_sketch_ndjson(text);
  if (options.sketch_index >= static_cast<int>(parsed.sketches.size()))
    throw Error("input has " + std::to_string(parsed.sketches.size()) + " usable sketches, index " +
                std::to_string(options.sketch_index) + " requested");
  const Sketch norm = normalize_sketch(parsed.sketches[options.sketch_index], config.synth.size, config.synth.margin);
  Sample s = build_ground_truth(norm, config.synth);
  s.seed = config.seed;
  return s;
}

ordered_json score_json(const GraphScore& s) {
  return {{"true_positive", s.true_positive}, {"false_positive", s.false_positive},
          {"false_negative", s.false_negative}, {"precision", s.precision()},
          {"recall", s.recall()},               {"f1", s.f1()},
          {"vertices_matched", s.matched_vertices}, {"vertices_reference", s.reference_vertices}};
}

} // namespace

std::string run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
  StageClock clock(options.timings);
  clock.run("config", [&] { validate(config); });
  const std::filesystem::path out = config.output;

  Sample sample = clock.run("synth", [&] { return load_sample(config, options); });

  LabelMasks masks = clock.run("degrade", [&] {
    const DegradeParams& d = config.degrade;
    if (d.drop_rate == 0.0 && d.salt_rate == 0.0 && d.dilate_vertices_px == 0) return sample.masks;
    return degrade_masks(sample.masks, d, stream_rng(config.seed, 0xde9)());
  });

  const infer::InferResult inferred =
      clock.run("infer", [&] { return infer::feedback_infer(sample.image, masks, config.infer); });

  const toolpath::StrokeSequence strokes =
      clock.run("strokes", [&] { return toolpath::strokes_from_graph(inferred.graph); });

  const std::string gcode = clock.run("gcode", [&] {
    const std::vector<Point>& v = inferred.graph.vertices();
    const toolpath::PlateTransform t =
        v.empty() ? toolpath::PlateTransform{} : toolpath::fit_to_plate(bounding_box(v), config.plate_size, config.plate_origin);
    return toolpath::emit_gcode(strokes, v, t);
  });

  const std::string svg =
      clock.run("svg", [&] { return toolpath::emit_svg(strokes, inferred.graph.vertices(), config.synth.size); });

  ordered_json report;
  report["seed"] = config.seed;
  report["source"] = config.input.empty() ? "procedural" : "ndjson";
  report["sketch_index"] = options.sketch_index;
  report["truth"] = {{"vertices", sample.graph.vertex_count()}, {"edges", sample.graph.edge_count()}};
  ordered_json per_iteration = ordered_json::array();
  for (const auto& edges : inferred.trace) per_iteration.push_back(edges.size());
  report["edges_per_iteration"] = per_iteration;
  report["graph"] = {{"vertices", inferred.graph.vertex_count()},
                     {"edges", inferred.graph.edge_count()},
                     {"strokes", strokes.strokes.size()}};
  report["score"] = score_json(score_graph(inferred.graph, sample.graph));

  clock.run("write", [&] {
    save_png_gray(out / "input.png", sample.image);
    save_masks_png(out / "masks.png", masks);
    write_file_atomic(out / "graph_truth.json", graph_to_json(sample.graph));
    write_file_atomic(out / "graph.json", graph_to_json(inferred.graph));
    write_file_atomic(out / "strokes.json", toolpath::strokes_to_json(strokes));
    write_file_atomic(out / "drawing.gcode", gcode);
    write_file_atomic(out / "drawing.svg", svg);
    // Recorded relative to the artifact tree so the tree does not depend on
    // where it was written.
    PipelineConfig recorded = config;
    recorded.output = ".";
    write_file_atomic(out / "config.json", config_to_json(recorded));
  });
  if (clock.enabled()) report["timings_ms"] = clock.timings();
  const std::string text = report.dump(2) + "\n";
  clock.run("write", [&] { write_file_atomic(out / "report.json", text); });
  return text;
}

} // namespace sketchgraph
