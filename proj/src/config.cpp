#include "sketchgraph/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace sketchgraph {

using nlohmann::ordered_json;

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw Error(std::string("config: ") + field + " " + rule);
}

bool finite_in(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

// Copies j[key] into out when present and records the key as consumed.
template <class T>
void read(const ordered_json& j, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(std::string("config: field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const ordered_json& j, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!seen.count(key)) throw Error("config: unknown key '" + where + key + "'");
}

const ordered_json& object_at(const ordered_json& j, const char* key) {
  static const ordered_json empty = ordered_json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw Error(std::string("config: '") + key + "' must be an object");
  return j.at(key);
}

} // namespace

void validate(const PipelineConfig& c) {
  require(c.synth.size >= 8 && c.synth.size <= 8192, "synth.size", "must lie in [8, 8192]");
  require(finite_in(c.synth.stroke_width, 1.0, 64.0), "synth.stroke_width", "must lie in [1, 64]");
  require(finite_in(c.synth.vertex_radius, 0.5, 64.0), "synth.vertex_radius", "must lie in [0.5, 64]");
  require(finite_in(c.synth.margin, 0.0, c.synth.size / 2.0 - 1.0), "synth.margin", "must lie in [0, size/2 - 1]");
  require(finite_in(c.synth.merge_radius, 0.0, 16.0), "synth.merge_radius", "must lie in [0, 16]");
  require(finite_in(c.synth.eps, 0.0, 1e-2), "synth.eps", "must lie in [0, 0.01]");
  infer::validate(c.infer);
  require(finite_in(c.degrade.drop_rate, 0.0, 1.0), "degrade.drop", "must lie in [0, 1]");
  require(c.degrade.dilate_vertices_px >= 0 && c.degrade.dilate_vertices_px <= 64, "degrade.dilate",
          "must lie in [0, 64]");
  require(finite_in(c.degrade.salt_rate, 0.0, 1.0), "degrade.salt", "must lie in [0, 1]");
  require(std::isfinite(c.plate_size) && c.plate_size > 0.0, "plate.size", "must be positive");
  require(std::isfinite(c.plate_origin), "plate.origin", "must be finite");
  require(c.samples >= 1, "samples", "must be at least 1");
}

std::string config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["input"] = c.input;
  j["output"] = c.output;
  j["synth"] = {{"size", c.synth.size},
                {"stroke_width", c.synth.stroke_width},
                {"vertex_radius", c.synth.vertex_radius},
                {"margin", c.synth.margin},
                {"merge_radius", c.synth.merge_radius},
                {"eps", c.synth.eps}};
  j["infer"] = {{"beta", c.infer.beta},
                {"tau", c.infer.tau0},
                {"lambda", c.infer.lambda},
                {"imax", c.infer.i_max},
                {"render_width", c.infer.render_width},
                {"vertex_radius", c.infer.vertex_radius},
                {"activation_threshold", c.infer.activation_threshold},
                {"dead_zone", c.infer.dead_zone},
                {"pass_through_tol", c.infer.pass_through_tol},
                {"residual_tolerance_px", c.infer.residual_tolerance_px}};
  j["degrade"] = {{"drop", c.degrade.drop_rate}, {"dilate", c.degrade.dilate_vertices_px}, {"salt", c.degrade.salt_rate}};
  j["plate"] = {{"size", c.plate_size}, {"origin", c.plate_origin}};
  return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: top level must be an object");

  PipelineConfig c;
  std::set<std::string> top{"synth", "infer", "degrade", "plate"};
  read(j, "seed", c.seed, top);
  read(j, "samples", c.samples, top);
  read(j, "input", c.input, top);
  read(j, "output", c.output, top);
  reject_unknown(j, top, "");

  const ordered_json& s = object_at(j, "synth");
  std::set<std::string> seen;
  read(s, "size", c.synth.size, seen);
  read(s, "stroke_width", c.synth.stroke_width, seen);
  read(s, "vertex_radius", c.synth.vertex_radius, seen);
  read(s, "margin", c.synth.margin, seen);
  read(s, "merge_radius", c.synth.merge_radius, seen);
  read(s, "eps", c.synth.eps, seen);
  reject_unknown(s, seen, "synth.");

  const ordered_json& in = object_at(j, "infer");
  seen.clear();
  read(in, "beta", c.infer.beta, seen);
  read(in, "tau", c.infer.tau0, seen);
  read(in, "lambda", c.infer.lambda, seen);
  read(in, "imax", c.infer.i_max, seen);
  read(in, "render_width", c.infer.render_width, seen);
  read(in, "vertex_radius", c.infer.vertex_radius, seen);
  read(in, "activation_threshold", c.infer.activation_threshold, seen);
  read(in, "dead_zone", c.infer.dead_zone, seen);
  read(in, "pass_through_tol", c.infer.pass_through_tol, seen);
  read(in, "residual_tolerance_px", c.infer.residual_tolerance_px, seen);
  reject_unknown(in, seen, "infer.");

  const ordered_json& d = object_at(j, "degrade");
  seen.clear();
  read(d, "drop", c.degrade.drop_rate, seen);
  read(d, "dilate", c.degrade.dilate_vertices_px, seen);
  read(d, "salt", c.degrade.salt_rate, seen);
  reject_unknown(d, seen, "degrade.");

  const ordered_json& p = object_at(j, "plate");
  seen.clear();
  read(p, "size", c.plate_size, seen);
  read(p, "origin", c.plate_origin, seen);
  reject_unknown(p, seen, "plate.");

  validate(c);
  return c;
}

} // namespace sketchgraph
