#pragma once

#include <cstdint>
#include <string>

#include "sketchgraph/graphinfer.hpp"
#include "sketchgraph/synth2d.hpp"

namespace sketchgraph {

struct PipelineConfig {
  SynthParams synth;
  infer::InferParams infer;
  DegradeParams degrade;
  double plate_size = 64.0;
  double plate_origin = 25.0;
  std::uint64_t seed = 0;
  int samples = 1;
  std::string input;
  std::string output = "out";

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Throws Error naming the first field outside its range.
void validate(const PipelineConfig& config);

/// Key order is fixed, so to_json(from_json(to_json(c))) == to_json(c).
std::string config_to_json(const PipelineConfig& config);

/// Missing keys keep their defaults; unknown keys are an error.
PipelineConfig config_from_json(const std::string& text);

} // namespace sketchgraph
