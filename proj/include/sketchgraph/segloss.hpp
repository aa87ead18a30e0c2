#pragma once

#include <cstdint>
#include <vector>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph::segloss {

/// Per-pixel activations, one plane per class: value(c, x, y) lives at
/// data[(c * height + y) * width + x].
struct ActivationField {
  int classes = 3;
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ActivationField() = default;
  ActivationField(int k, int w, int h, double fill = 0.0)
      : classes(k), width(w), height(h), data(static_cast<std::size_t>(k) * w * h, fill) {}

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  double& at(int c, std::size_t pixel) { return data[c * pixels() + pixel]; }
  double at(int c, std::size_t pixel) const { return data[c * pixels() + pixel]; }
};

/// True class id per pixel, row-major.
struct LabelField {
  int width = 0;
  int height = 0;
  std::vector<int> data;

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
};

enum class Weighting {
  plain,         // w = 1
  balanced,      // w = omega(true label)
  max_weighted,  // w = max(omega(true label), omega(predicted label))
};

/// Inverse-frequency class weights normalized to sum 1. Frequencies are
/// per image and floored at 1 / pixel count so absent classes stay finite.
std::vector<double> class_weights(const LabelField& labels, int classes);

struct LossResult {
  double loss = 0.0;
  ActivationField gradient;  // d loss / d activation, weights held constant
};

/// Mean over pixels of w(x) * -log(max(softmax(a(x))[label], 1e-12)),
/// with -log softmax evaluated as logsumexp(a) - a[label].
/// The predicted label is the argmax of the softmax, ties to the lowest id.
LossResult xent_loss(const ActivationField& acts, const LabelField& labels, Weighting mode);

/// Loss only; used by finite-difference checks.
double xent_value(const ActivationField& acts, const LabelField& labels, Weighting mode);

/// Largest relative error between the analytic gradient and central
/// differences with step h of the loss evaluated in long double, where
/// rel = |g - fd| / max(|g|, |fd|).
/// Coordinates where both magnitudes are below abs_floor are skipped.
double gradient_check(const ActivationField& acts, const LabelField& labels, Weighting mode, double h = 1e-6,
                      double abs_floor = 1e-9);

} // namespace sketchgraph::segloss
