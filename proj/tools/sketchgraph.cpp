#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchgraph/atomic_file.hpp"
#include "sketchgraph/config.hpp"
#include "sketchgraph/csg.hpp"
#include "sketchgraph/graphinfer.hpp"
#include "sketchgraph/pipeline.hpp"
#include "sketchgraph/png_io.hpp"
#include "sketchgraph/segloss.hpp"
#include "sketchgraph/simd/kernels.hpp"
#include "sketchgraph/sketch_gen.hpp"
#include "sketchgraph/tam.hpp"
#include "sketchgraph/toolpath.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sketchgraph;

namespace {

constexpr int kExitStage = 1;
constexpr int kExitMissingInput = 2;

// Flags shared by every subcommand; unset ones leave the config untouched.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> size;
  std::optional<double> beta, tau, lambda;
  std::optional<int> imax;
  std::optional<std::string> out, input, degrade;
};

void add_common_flags(CLI::App& app, CommonFlags& f) {
  app.add_option("--config", f.config_path, "JSON config file");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--size", f.size, "Canvas size in pixels");
  app.add_option("--beta", f.beta, "ROI width");
  app.add_option("--tau", f.tau, "Initial plausibility threshold");
  app.add_option("--lambda", f.lambda, "Threshold update step");
  app.add_option("--imax", f.imax, "Feedback iterations");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--input", f.input, "Input path");
  app.add_option("--degrade", f.degrade, "Mask degradation, drop=F,dilate=N,salt=F");
}

PipelineConfig resolve_config(const CommonFlags& f) {
  PipelineConfig c;
  if (!f.config_path.empty()) c = config_from_json(read_file(f.config_path));
  if (f.seed) c.seed = *f.seed;
  if (f.size) c.synth.size = *f.size;
  if (f.beta) c.infer.beta = *f.beta;
  if (f.tau) c.infer.tau0 = *f.tau;
  if (f.lambda) c.infer.lambda = *f.lambda;
  if (f.imax) c.infer.i_max = *f.imax;
  if (f.out) c.output = *f.out;
  if (f.input) c.input = *f.input;
  if (f.degrade) c.degrade = parse_degrade_spec(*f.degrade);
  validate(c);
  return c;
}

std::string need_input(const PipelineConfig& c, const char* what) {
  if (c.input.empty()) throw Error(std::string("--input ") + what + " is required");
  return c.input;
}

fs::path out_dir(const PipelineConfig& c) { return fs::path(c.output); }

// ---------------------------------------------------------------------------

int cmd_synth(const PipelineConfig& c, int samples, bool augment) {
  const fs::path dir = out_dir(c);
  DatasetParams params;
  params.synth = c.synth;
  const bool degrade = c.degrade.drop_rate > 0.0 || c.degrade.salt_rate > 0.0 || c.degrade.dilate_vertices_px > 0;

  std::vector<Sample> source;
  ordered_json skipped = {{"strokes", 0}, {"sketches", 0}, {"augment", 0}};
  if (!c.input.empty()) {
    const NdjsonResult parsed = parse_sketch_ndjson(read_file(c.input));
    skipped["strokes"] = parsed.skipped_strokes;
    skipped["sketches"] = parsed.skipped_sketches;
    for (const Sketch& sk : parsed.sketches)
      source.push_back(build_ground_truth(normalize_sketch(sk, c.synth.size, c.synth.margin), c.synth));
  }
  const int count = c.input.empty() ? samples : static_cast<int>(source.size());

  ordered_json entries = ordered_json::array();
  int aug_skipped = 0;
  for (int i = 0; i < count; ++i) {
    Sample s = c.input.empty() ? make_dataset_sample(c.seed, static_cast<std::uint64_t>(i), params) : source[i];
    std::mt19937_64 rng = stream_rng(c.seed, 0x10000000ull + static_cast<std::uint64_t>(i));
    s.seed = rng();
    if (augment) {
      std::optional<Sample> a = augment_random(s, rng, c.synth);
      if (!a) {
        ++aug_skipped;
        continue;
      }
      const std::uint64_t seed = s.seed;
      s = std::move(*a);
      s.seed = seed;
    }
    const std::uint64_t degrade_seed = rng();
    if (degrade) s.masks = degrade_masks(s.masks, c.degrade, degrade_seed);
    char id[32];
    std::snprintf(id, sizeof id, "%06d", i);
    write_sample(dir, id, s);
    entries.push_back({{"id", id},
                       {"seed", s.seed},
                       {"degrade_seed", degrade ? ordered_json(degrade_seed) : ordered_json(nullptr)},
                       {"vertices", s.graph.vertex_count()},
                       {"edges", s.graph.edge_count()}});
  }
  skipped["augment"] = aug_skipped;

  ordered_json manifest;
  manifest["seed"] = c.seed;
  manifest["source"] = c.input.empty() ? "procedural" : c.input;
  manifest["augment"] = augment;
  manifest["config"] = ordered_json::parse(config_to_json(c));
  manifest["skipped"] = skipped;
  manifest["samples"] = entries;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  std::printf("synth: wrote %zu samples to %s\n", entries.size(), dir.string().c_str());
  return 0;
}

int cmd_infer(const PipelineConfig& c, const std::string& masks_path, bool naive_only) {
  const fs::path input = need_input(c, "(input image PNG)");
  if (masks_path.empty()) throw Error("--masks is required");
  const RasterImage image = load_png_gray(input);
  const LabelMasks masks = load_masks_png(masks_path);
  infer::InferParams p = c.infer;
  if (naive_only) p.i_max = 0;
  const infer::InferResult r = infer::feedback_infer(image, masks, p);

  ordered_json trace = ordered_json::array();
  for (const auto& edges : r.trace) trace.push_back(edges.size());
  ordered_json report = {{"vertices", r.graph.vertex_count()}, {"edges", r.graph.edge_count()},
                         {"edges_per_iteration", trace}};
  write_file_atomic(out_dir(c) / "graph.json", graph_to_json(r.graph));
  write_file_atomic(out_dir(c) / "infer_report.json", report.dump(2) + "\n");
  std::printf("infer: %d vertices, %d edges\n", r.graph.vertex_count(), r.graph.edge_count());
  return 0;
}

SkeletonGraph read_graph(const PipelineConfig& c) {
  return graph_from_json(read_file(need_input(c, "(graph JSON)")));
}

toolpath::StrokeSequence strokes_for(const SkeletonGraph& g, const std::string& strokes_path) {
  return strokes_path.empty() ? toolpath::strokes_from_graph(g) : toolpath::strokes_from_json(read_file(strokes_path));
}

int cmd_strokes(const PipelineConfig& c) {
  const toolpath::StrokeSequence seq = toolpath::strokes_from_graph(read_graph(c));
  write_file_atomic(out_dir(c) / "strokes.json", toolpath::strokes_to_json(seq));
  std::printf("strokes: %zu strokes\n", seq.strokes.size());
  return 0;
}

int cmd_gcode(const PipelineConfig& c, const std::string& strokes_path) {
  const SkeletonGraph g = read_graph(c);
  const toolpath::StrokeSequence seq = strokes_for(g, strokes_path);
  const toolpath::PlateTransform t = g.vertices().empty()
                                         ? toolpath::PlateTransform{}
                                         : toolpath::fit_to_plate(bounding_box(g.vertices()), c.plate_size, c.plate_origin);
  write_file_atomic(out_dir(c) / "drawing.gcode", toolpath::emit_gcode(seq, g.vertices(), t));
  return 0;
}

int cmd_svg(const PipelineConfig& c, const std::string& strokes_path) {
  const SkeletonGraph g = read_graph(c);
  write_file_atomic(out_dir(c) / "drawing.svg", toolpath::emit_svg(strokes_for(g, strokes_path), g.vertices(), c.synth.size));
  return 0;
}

int cmd_pipeline(const PipelineConfig& c, int index, bool timings) {
  PipelineOptions opt;
  opt.sketch_index = index;
  opt.timings = timings;
  std::fputs(run_pipeline(c, opt).c_str(), stdout);
  return 0;
}

int cmd_premise(const PipelineConfig& c, int samples, const std::vector<double>& betas) {
  DatasetParams params;
  params.synth = c.synth;
  infer::PremiseAccumulator acc(betas);
  for (int i = 0; i < samples; ++i) acc.add(make_dataset_sample(c.seed, static_cast<std::uint64_t>(i), params));
  const infer::PremiseStats& st = acc.stats();

  ordered_json out;
  out["seed"] = c.seed;
  out["samples"] = samples;
  out["skipped"] = st.skipped;
  ordered_json per_beta = ordered_json::array();
  bool all_ok = true;
  for (std::size_t b = 0; b < st.betas.size(); ++b) {
    int positive = 0;
    for (const auto& r : st.records[b]) positive += r.gap_hat > 0.0;
    const double frac = st.records[b].empty() ? 0.0 : static_cast<double>(positive) / st.records[b].size();
    const bool unimodal = infer::is_unimodal(st.tau_histograms[b].counts);
    all_ok = all_ok && frac >= 0.9 && unimodal;
    const auto& h = st.tau_histograms[b];
    per_beta.push_back({{"beta", st.betas[b]},
                        {"positive_gap_fraction", frac},
                        {"tau_hat_unimodal", unimodal},
                        {"tau_hat_histogram", {{"log10_lo", h.log_lo}, {"log10_hi", h.log_hi}, {"counts", h.counts},
                                               {"underflow", h.underflow}, {"overflow", h.overflow}}}});
    std::printf("beta %g: gap > 0 on %.1f%% of samples, tau_hat histogram %s\n", st.betas[b], 100.0 * frac,
                unimodal ? "unimodal" : "not unimodal");
  }
  out["betas"] = per_beta;
  write_file_atomic(out_dir(c) / "premise.json", out.dump(2) + "\n");
  return all_ok ? 0 : 1;
}

int cmd_loss_check(const PipelineConfig& c, int instances, double tolerance) {
  std::mt19937_64 rng = stream_rng(c.seed, 0x1055);
  std::normal_distribution<double> act(0.0, 2.0);
  std::uniform_int_distribution<int> label(0, 2);
  const segloss::Weighting modes[] = {segloss::Weighting::plain, segloss::Weighting::balanced,
                                      segloss::Weighting::max_weighted};
  const char* names[] = {"plain", "balanced", "max_weighted"};
  double worst[3] = {0, 0, 0};
  for (int n = 0; n < instances; ++n) {
    segloss::ActivationField a(3, 8, 8);
    for (double& v : a.data) v = act(rng);
    segloss::LabelField l{8, 8, std::vector<int>(64)};
    for (int& v : l.data) v = label(rng);
    for (int m = 0; m < 3; ++m) worst[m] = std::max(worst[m], segloss::gradient_check(a, l, modes[m]));
  }
  bool ok = true;
  for (int m = 0; m < 3; ++m) {
    std::printf("%-13s max relative gradient error %.3e\n", names[m], worst[m]);
    ok = ok && worst[m] <= tolerance;
  }
  return ok ? 0 : 1;
}

int cmd_csg(const PipelineConfig& c, int count, int n_max, double sym_rate) {
  std::string lines;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = stream_rng(c.seed, static_cast<std::uint64_t>(i))();
    csg::CsgScene scene = csg::sample_csg_tree(n_max, sym_rate, seed);
    lines += ordered_json::parse(csg::scene_to_json(scene)).dump() + "\n";
  }
  write_file_atomic(out_dir(c) / "csg.ndjson", lines);
  std::printf("csg-sample: wrote %d trees\n", count);
  return 0;
}

int cmd_tam(const PipelineConfig& c, const std::string& textures, std::vector<float> breakpoints, float floor,
            bool literal) {
  const RasterImage illum = load_png_gray(need_input(c, "(illumination PNG)"));
  tam::TamSpec spec;
  if (textures.empty()) {
    spec = tam::default_spec();
    if (!breakpoints.empty()) spec.breakpoints = breakpoints;
    spec.black_floor = floor;
  } else {
    if (breakpoints.empty()) breakpoints = tam::default_spec().breakpoints;
    spec = tam::load_spec(textures, breakpoints, floor);
  }
  spec.literal_direction = literal;
  save_png_gray(out_dir(c) / "tam.png", tam::tam_shade(illum, spec));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line drawing to skeleton graph, stroke order and plotter output"};
  app.require_subcommand(1);
  CommonFlags flags;

  int samples = 16;
  bool augment = false;
  auto* synth = app.add_subcommand("synth", "Generate a labelled dataset");
  synth->add_option("--samples", samples, "Number of procedural samples");
  synth->add_flag("--augment", augment, "Apply one random augmentation per sample");

  std::string masks_path;
  bool naive = false;
  auto* inf = app.add_subcommand("infer", "Masks to skeleton graph");
  inf->add_option("--masks", masks_path, "RGB masks PNG (R vertex, G edge, B background)");
  inf->add_flag("--naive", naive, "Threshold once without feedback");

  std::string strokes_path;
  auto* strokes = app.add_subcommand("strokes", "Graph to ordered strokes");
  auto* gcode = app.add_subcommand("gcode", "Graph to G-code");
  gcode->add_option("--strokes", strokes_path, "Use this stroke order instead of recomputing");
  auto* svg = app.add_subcommand("svg", "Graph to SVG");
  svg->add_option("--strokes", strokes_path, "Use this stroke order instead of recomputing");

  int index = 0;
  bool timings = false;
  auto* pipe = app.add_subcommand("pipeline", "Sketch to G-code and SVG in one run");
  pipe->add_option("--index", index, "Sketch index within the input");
  pipe->add_flag("--timings", timings, "Include wall-clock stage timings in the report");

  int premise_samples = 1024;
  std::vector<double> betas{3.0, 5.0, 7.0};
  auto* premise = app.add_subcommand("validate-premise", "Threshold gap statistics over a dataset");
  premise->add_option("--samples", premise_samples, "Number of samples");
  premise->add_option("--betas", betas, "ROI widths")->delimiter(',');

  int loss_instances = 100;
  double loss_tol = 1e-4;
  auto* loss = app.add_subcommand("loss-check", "Finite-difference check of the segmentation loss");
  loss->add_option("--instances", loss_instances, "Random 8x8x3 instances");
  loss->add_option("--tolerance", loss_tol, "Largest accepted relative error");

  int csg_count = 1, csg_nmax = 6;
  double csg_sym = 0.5;
  auto* csgc = app.add_subcommand("csg-sample", "Sample CSG trees");
  csgc->add_option("--count", csg_count, "Number of trees");
  csgc->add_option("--nmax", csg_nmax, "Largest primitive count");
  csgc->add_option("--sym-rate", csg_sym, "Probability of each symmetric pair");

  std::string textures;
  std::vector<float> breakpoints;
  float black_floor = 0.02f;
  bool literal = false;
  auto* tamc = app.add_subcommand("tam", "Shade an illumination image with a tonal art map");
  tamc->add_option("--textures", textures, "Directory of texture PNGs, sorted by name");
  tamc->add_option("--breakpoints", breakpoints, "Ascending illumination levels")->delimiter(',');
  tamc->add_option("--black-floor", black_floor, "Illumination below this is solid black");
  tamc->add_flag("--literal-direction", literal, "Apply texture i where breakpoint_i <= illumination");

  for (CLI::App* sub : app.get_subcommands({})) add_common_flags(*sub, flags);
  add_common_flags(app, flags);
  app.fallthrough();
  auto* isa = app.add_option_function<std::string>(
      "--isa",
      [](const std::string& v) {
        if (!simd::force_isa(v == "avx2" ? simd::Isa::avx2 : simd::Isa::scalar))
          throw CLI::ValidationError("--isa", v + " is not supported on this CPU");
      },
      "Kernel set: scalar or avx2");
  isa->check(CLI::IsMember({"scalar", "avx2"}));

  CLI11_PARSE(app, argc, argv);

  const char* stage = "config";
  try {
    const PipelineConfig c = resolve_config(flags);
    CLI::App* sub = app.get_subcommands().front();
    stage = sub->get_name().c_str();
    if (sub == synth) return cmd_synth(c, samples, augment);
    if (sub == inf) return cmd_infer(c, masks_path, naive);
    if (sub == strokes) return cmd_strokes(c);
    if (sub == gcode) return cmd_gcode(c, strokes_path);
    if (sub == svg) return cmd_svg(c, strokes_path);
    if (sub == pipe) return cmd_pipeline(c, index, timings);
    if (sub == premise) return cmd_premise(c, premise_samples, betas);
    if (sub == loss) return cmd_loss_check(c, loss_instances, loss_tol);
    if (sub == csgc) return cmd_csg(c, csg_count, csg_nmax, csg_sym);
    if (sub == tamc) return cmd_tam(c, textures, breakpoints, black_floor, literal);
  } catch (const FileNotFound& e) {
    std::fprintf(stderr, "error: input file not found: %s\n", e.path().string().c_str());
    return kExitMissingInput;
  } catch (const StageError& e) {
    std::fprintf(stderr, "error [%s] %s\n", e.stage().c_str(), e.what());
    return kExitStage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error [%s] %s\n", stage, e.what());
    return kExitStage;
  }
  return kExitStage;
}
