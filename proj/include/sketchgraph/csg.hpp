#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace sketchgraph::csg {

// Solid grammar: Geometry := Operator Geometry Geometry | TransformedPrimitive,
// Operator := union | difference. Trees are written in prefix notation with
// leaf indices into the primitive list.

enum class Op { unite, subtract };

struct Token {
  enum class Kind { op, leaf } kind = Kind::leaf;
  Op op = Op::unite;
  int leaf = 0;

  static Token make_op(Op o) { return {Kind::op, o, 0}; }
  static Token make_leaf(int i) { return {Kind::leaf, Op::unite, i}; }
  friend bool operator==(const Token&, const Token&) = default;
};

struct CsgTree {
  std::vector<Token> prefix;
  int leaf_count = 0;

  friend bool operator==(const CsgTree&, const CsgTree&) = default;
};

/// Accepts "∪" or "U" for union, "−" (U+2212) or "-" for difference, and
/// non-negative integers for leaves. Throws Error on unknown tokens, missing
/// operands, trailing tokens, or leaf indices that are not exactly 0..N-1.
CsgTree parse_prefix(const std::vector<std::string>& tokens);
/// Whitespace-separated form of the above.
CsgTree parse_prefix(std::string_view text);

std::vector<std::string> serialize(const CsgTree& tree);
std::string to_string(const CsgTree& tree);

/// Re-checks all grammar invariants; returns an empty string when valid.
std::string check_invariants(const CsgTree& tree);

// ---------------------------------------------------------------------------

enum class Kind { cube, cylinder, prism, sphere, pyramid, cone };
enum class Orientation { pos_x, pos_y, pos_z, neg_x, neg_y, neg_z };
enum class Axis { x, y };

std::string_view kind_name(Kind k);
std::string_view orientation_name(Orientation o);

/// Sampling weights, in enum order.
extern const std::array<double, 6> kKindWeights;
extern const std::array<double, 6> kOrientationWeights;

struct Symmetry {
  Axis axis = Axis::x;
  double shift = 0.0;  // r; partners sit at t_A + r and t_A - r

  friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

struct TransformedPrimitive {
  Kind kind = Kind::cube;
  Orientation orientation = Orientation::pos_z;
  std::array<double, 3> scale{1.0, 1.0, 1.0};
  std::array<double, 3> translate{0.0, 0.0, 0.0};
  std::optional<Symmetry> symmetry;

  friend bool operator==(const TransformedPrimitive&, const TransformedPrimitive&) = default;
};

inline constexpr std::array<double, 3> kScaleLo{0.2, 0.2, 0.2};
inline constexpr std::array<double, 3> kScaleHi{1.1, 1.1, 1.1};
inline constexpr std::array<double, 3> kTranslateLo{-0.7, -0.7, 0.0};
inline constexpr std::array<double, 3> kTranslateHi{0.7, 0.7, 0.3};
inline constexpr double kShiftMean = 0.4;
inline constexpr double kShiftVariance = 0.25;

/// n1 single primitives followed by n2 mirrored pairs (original then clone),
/// n1 + 2 n2 records in total.
std::vector<TransformedPrimitive> sample_transformed_primitives(int n1, int n2, std::mt19937_64& rng);
std::vector<TransformedPrimitive> sample_transformed_primitives(int n1, int n2, std::uint64_t seed);

struct CsgScene {
  CsgTree tree;
  std::vector<TransformedPrimitive> primitives;
  int singles = 0;  // N1
  int pairs = 0;    // N2
  std::uint64_t seed = 0;
};

/// N ~ U{1..n_max}; N2 successes of floor(N/2) Bernoulli(sym_rate) trials;
/// N1 = N - 2 N2. Pairs become unit-depth unions; all units are then merged
/// bottom-up, each step joining two adjacent units picked at random with an
/// operator drawn from a fair coin.
CsgScene sample_csg_tree(int n_max, double sym_rate, std::mt19937_64& rng);
CsgScene sample_csg_tree(int n_max, double sym_rate, std::uint64_t seed);

/// {"prefix": [...], "primitives": [...], "seed": n}
std::string scene_to_json(const CsgScene& scene);

} // namespace sketchgraph::csg
