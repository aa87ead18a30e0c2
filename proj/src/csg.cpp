#include "sketchgraph/csg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph::csg {

namespace {

constexpr std::string_view kUnion = "\xE2\x88\xAA";  // U+222A
constexpr std::string_view kMinus = "\xE2\x88\x92";  // U+2212

Token parse_token(const std::string& tok) {
  if (tok == kUnion || tok == "U") return Token::make_op(Op::unite);
  if (tok == kMinus || tok == "-") return Token::make_op(Op::subtract);
  int value = -1;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
    throw Error("csg: unknown token '" + tok + "'");
  return Token::make_leaf(value);
}

// Index one past the subtree starting at pos, or npos when operands run out.
std::size_t subtree_end(const std::vector<Token>& prefix, std::size_t pos) {
  std::size_t need = 1;
  while (need > 0) {
    if (pos >= prefix.size()) return std::string::npos;
    need += prefix[pos].kind == Token::Kind::op ? 1 : -1;
    ++pos;
  }
  return pos;
}

} // namespace

std::string check_invariants(const CsgTree& tree) {
  if (tree.prefix.empty()) return "empty tree";
  const std::size_t end = subtree_end(tree.prefix, 0);
  if (end == std::string::npos) return "operator is missing an operand";
  if (end != tree.prefix.size()) return "tokens left over after a complete tree";
  std::vector<int> seen;
  for (const Token& t : tree.prefix)
    if (t.kind == Token::Kind::leaf) seen.push_back(t.leaf);
  if (static_cast<int>(seen.size()) != tree.leaf_count) return "leaf count mismatch";
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < static_cast<int>(seen.size()); ++i)
    if (seen[i] != i) return "leaf indices must be exactly 0..N-1, each once";
  return {};
}

CsgTree parse_prefix(const std::vector<std::string>& tokens) {
  CsgTree tree;
  for (const std::string& tok : tokens) {
    tree.prefix.push_back(parse_token(tok));
    if (tree.prefix.back().kind == Token::Kind::leaf) ++tree.leaf_count;
  }
  if (const std::string why = check_invariants(tree); !why.empty()) throw Error("csg: " + why);
  return tree;
}

CsgTree parse_prefix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  return parse_prefix(tokens);
}

std::vector<std::string> serialize(const CsgTree& tree) {
  std::vector<std::string> out;
  for (const Token& t : tree.prefix) {
    if (t.kind == Token::Kind::leaf) {
      out.push_back(std::to_string(t.leaf));
    } else {
      out.emplace_back(t.op == Op::unite ? kUnion : kMinus);
    }
  }
  return out;
}

std::string to_string(const CsgTree& tree) {
  std::string s;
  for (const std::string& tok : serialize(tree)) {
    if (!s.empty()) s += ' ';
    s += tok;
  }
  return s;
}

// ---------------------------------------------------------------------------

// The cone weight is not recoverable from the published PMF; it is set to
// 1/35 and the set renormalized ({10, 10, 2, 1, 1, 1} / 25).
const std::array<double, 6> kKindWeights{10.0 / 25, 10.0 / 25, 2.0 / 25, 1.0 / 25, 1.0 / 25, 1.0 / 25};
const std::array<double, 6> kOrientationWeights{1.0 / 16, 1.0 / 16, 1.0 / 2, 1.0 / 16, 1.0 / 16, 1.0 / 4};

std::string_view kind_name(Kind k) {
  static constexpr std::array<std::string_view, 6> names{"cube", "cylinder", "prism", "sphere", "pyramid", "cone"};
  return names[static_cast<int>(k)];
}

std::string_view orientation_name(Orientation o) {
  static constexpr std::array<std::string_view, 6> names{"+X", "+Y", "+Z", "-X", "-Y", "-Z"};
  return names[static_cast<int>(o)];
}

namespace {

TransformedPrimitive sample_one(std::mt19937_64& rng) {
  std::discrete_distribution<int> kind(kKindWeights.begin(), kKindWeights.end());
  std::discrete_distribution<int> orient(kOrientationWeights.begin(), kOrientationWeights.end());
  TransformedPrimitive p;
  p.kind = static_cast<Kind>(kind(rng));
  p.orientation = static_cast<Orientation>(orient(rng));
  for (int a = 0; a < 3; ++a) p.scale[a] = std::uniform_real_distribution<double>(kScaleLo[a], kScaleHi[a])(rng);
  for (int a = 0; a < 3; ++a)
    p.translate[a] = std::uniform_real_distribution<double>(kTranslateLo[a], kTranslateHi[a])(rng);
  return p;
}

} // namespace

std::vector<TransformedPrimitive> sample_transformed_primitives(int n1, int n2, std::mt19937_64& rng) {
  if (n1 < 0 || n2 < 0) throw Error("csg: primitive counts must be non-negative");
  std::vector<TransformedPrimitive> out;
  out.reserve(n1 + 2 * n2);
  for (int i = 0; i < n1; ++i) out.push_back(sample_one(rng));

  std::bernoulli_distribution axis(0.5);
  std::normal_distribution<double> shift(kShiftMean, std::sqrt(kShiftVariance));
  for (int i = 0; i < n2; ++i) {
    TransformedPrimitive base = sample_one(rng);
    const Symmetry sym{axis(rng) ? Axis::x : Axis::y, shift(rng)};
    const int a = sym.axis == Axis::x ? 0 : 1;
    base.symmetry = sym;
    TransformedPrimitive mirror = base;
    base.translate[a] += sym.shift;
    mirror.translate[a] -= sym.shift;
    out.push_back(base);
    out.push_back(mirror);
  }
  return out;
}

std::vector<TransformedPrimitive> sample_transformed_primitives(int n1, int n2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_transformed_primitives(n1, n2, rng);
}

CsgScene sample_csg_tree(int n_max, double sym_rate, std::mt19937_64& rng) {
  if (n_max < 1) throw Error("csg: n_max must be at least 1");
  if (!(sym_rate >= 0.0 && sym_rate <= 1.0)) throw Error("csg: symmetry rate must lie in [0, 1]");

  CsgScene scene;
  const int n = std::uniform_int_distribution<int>(1, n_max)(rng);
  std::bernoulli_distribution symmetric(sym_rate);
  for (int i = 0; i < n / 2; ++i)
    if (symmetric(rng)) ++scene.pairs;
  scene.singles = n - 2 * scene.pairs;
  scene.primitives = sample_transformed_primitives(scene.singles, scene.pairs, rng);

  std::vector<std::vector<Token>> units;
  for (int i = 0; i < scene.singles; ++i) units.push_back({Token::make_leaf(i)});
  for (int k = 0; k < scene.pairs; ++k) {
    const int first = scene.singles + 2 * k;
    units.push_back({Token::make_op(Op::unite), Token::make_leaf(first), Token::make_leaf(first + 1)});
  }
  std::shuffle(units.begin(), units.end(), rng);

  std::bernoulli_distribution use_union(0.5);
  while (units.size() > 1) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, units.size() - 2)(rng);
    std::vector<Token> merged{Token::make_op(use_union(rng) ? Op::unite : Op::subtract)};
    merged.insert(merged.end(), units[k].begin(), units[k].end());
    merged.insert(merged.end(), units[k + 1].begin(), units[k + 1].end());
    units[k] = std::move(merged);
    units.erase(units.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  scene.tree.prefix = std::move(units.front());
  scene.tree.leaf_count = n;
  return scene;
}

CsgScene sample_csg_tree(int n_max, double sym_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CsgScene scene = sample_csg_tree(n_max, sym_rate, rng);
  scene.seed = seed;
  return scene;
}

std::string scene_to_json(const CsgScene& scene) {
  nlohmann::ordered_json j;
  j["prefix"] = serialize(scene.tree);
  nlohmann::ordered_json prims = nlohmann::json::array();
  for (const TransformedPrimitive& p : scene.primitives) {
    nlohmann::ordered_json r;
    r["kind"] = kind_name(p.kind);
    r["orientation"] = orientation_name(p.orientation);
    r["scale"] = p.scale;
    r["translate"] = p.translate;
    if (p.symmetry) {
      r["symmetry"] = {{"axis", p.symmetry->axis == Axis::x ? "X" : "Y"}, {"shift", p.symmetry->shift}};
    } else {
      r["symmetry"] = nullptr;
    }
    prims.push_back(r);
  }
  j["primitives"] = prims;
  j["seed"] = scene.seed;
  return j.dump(2) + "\n";
}

} // namespace sketchgraph::csg
