#pragma once

#include <filesystem>
#include <string>

#include "sketchgraph/config.hpp"
#include "sketchgraph/synth2d.hpp"

namespace sketchgraph {

/// Error raised inside one pipeline stage; what() is prefixed with the stage.
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

struct PipelineOptions {
  int sketch_index = 0;  // line of the NDJSON input, or procedural sample index
  bool timings = false;  // wall-clock timings make the report non-reproducible
};

/// Loads one sketch (config.input NDJSON, or a procedural sample when input is
/// empty), builds ground truth, optionally degrades the masks, infers the
/// graph, orders strokes and emits G-code and SVG. Writes input.png,
/// masks.png, graph_truth.json, graph.json, strokes.json, drawing.gcode,
/// drawing.svg, config.json and report.json under config.output and returns
/// the report. FileNotFound propagates unchanged; other failures become
/// StageError.
std::string run_pipeline(const PipelineConfig& config, const PipelineOptions& options = {});

/// R = vertex, G = edge, B = background.
void save_masks_png(const std::filesystem::path& path, const LabelMasks& masks);
LabelMasks load_masks_png(const std::filesystem::path& path);

/// <id>_input.png, <id>_masks.png, <id>_graph.json under dir.
void write_sample(const std::filesystem::path& dir, const std::string& id, const Sample& sample);

} // namespace sketchgraph
