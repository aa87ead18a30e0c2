#include "sketchgraph/segloss.hpp"

#include <algorithm>
#include <cmath>

namespace sketchgraph::segloss {

namespace {

constexpr double kProbFloor = 1e-12;
const double kMaxNll = -std::log(kProbFloor);

void check_shapes(const ActivationField& acts, const LabelField& labels) {
  if (acts.classes < 2) throw Error("xent_loss: need at least two classes");
  if (acts.width != labels.width || acts.height != labels.height) throw Error("xent_loss: dimension mismatch");
  if (acts.data.size() != acts.classes * acts.pixels() || labels.data.size() != labels.pixels())
    throw Error("xent_loss: buffer size does not match dimensions");
  for (int l : labels.data)
    if (l < 0 || l >= acts.classes) throw Error("xent_loss: label id out of range");
}

// Softmax of one pixel into probs; returns log-sum-exp of the activations.
double softmax(const ActivationField& acts, std::size_t pixel, std::vector<double>& probs) {
  double top = acts.at(0, pixel);
  for (int c = 1; c < acts.classes; ++c) top = std::max(top, acts.at(c, pixel));
  double total = 0.0;
  for (int c = 0; c < acts.classes; ++c) {
    probs[c] = std::exp(acts.at(c, pixel) - top);
    total += probs[c];
  }
  for (int c = 0; c < acts.classes; ++c) probs[c] /= total;
  return top + std::log(total);
}

int argmax(const std::vector<double>& probs) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(probs.size()); ++c)
    if (probs[c] > probs[best]) best = c;
  return best;
}

double pixel_weight(Weighting mode, const std::vector<double>& omega, int label, int predicted) {
  switch (mode) {
  case Weighting::plain: return 1.0;
  case Weighting::balanced: return omega[label];
  case Weighting::max_weighted: return std::max(omega[label], omega[predicted]);
  }
  return 1.0;
}

LossResult evaluate(const ActivationField& acts, const LabelField& labels, Weighting mode, bool want_gradient) {
  check_shapes(acts, labels);
  const std::vector<double> omega =
      mode == Weighting::plain ? std::vector<double>(acts.classes, 1.0) : class_weights(labels, acts.classes);
  const std::size_t n = acts.pixels();
  const double inv_n = 1.0 / static_cast<double>(n);

  LossResult r;
  if (want_gradient) r.gradient = ActivationField(acts.classes, acts.width, acts.height);
  std::vector<double> probs(acts.classes);
  // Extended-precision sum: a perturbation of one pixel then changes the
  // total by exactly that pixel's term difference.
  long double total = 0.0L;
  for (std::size_t px = 0; px < n; ++px) {
    const double lse = softmax(acts, px, probs);
    const int label = labels.data[px];
    const double w = pixel_weight(mode, omega, label, argmax(probs));
    const double nll = lse - acts.at(label, px);
    total += w * std::min(nll, kMaxNll);
    // Below the probability floor the loss is locally constant.
    if (want_gradient && nll <= kMaxNll)
      for (int c = 0; c < acts.classes; ++c)
        r.gradient.at(c, px) = w * (probs[c] - (c == label ? 1.0 : 0.0)) * inv_n;
  }
  r.loss = static_cast<double>(total / static_cast<long double>(n));
  return r;
}

} // namespace

std::vector<double> class_weights(const LabelField& labels, int classes) {
  if (classes < 2) throw Error("class_weights: need at least two classes");
  const std::size_t n = labels.pixels();
  if (n == 0) throw Error("class_weights: empty label field");
  std::vector<double> counts(classes, 0.0);
  for (int l : labels.data) {
    if (l < 0 || l >= classes) throw Error("class_weights: label id out of range");
    counts[l] += 1.0;
  }
  const double floor = 1.0 / static_cast<double>(n);
  std::vector<double> w(classes);
  double total = 0.0;
  for (int c = 0; c < classes; ++c) {
    const double freq = std::max(counts[c] / static_cast<double>(n), floor);
    w[c] = 1.0 / freq;
    total += w[c];
  }
  for (double& v : w) v /= total;
  return w;
}

LossResult xent_loss(const ActivationField& acts, const LabelField& labels, Weighting mode) {
  return evaluate(acts, labels, mode, true);
}

double xent_value(const ActivationField& acts, const LabelField& labels, Weighting mode) {
  return evaluate(acts, labels, mode, false).loss;
}

namespace {

// The loss evaluated entirely in long double, so central differences are not
// limited by rounding the O(1) total to double.
long double loss_extended(const ActivationField& acts, const LabelField& labels, Weighting mode) {
  const std::vector<double> omega =
      mode == Weighting::plain ? std::vector<double>(acts.classes, 1.0) : class_weights(labels, acts.classes);
  std::vector<double> probs(acts.classes);
  long double total = 0.0L;
  for (std::size_t px = 0; px < acts.pixels(); ++px) {
    softmax(acts, px, probs);
    const int label = labels.data[px];
    long double top = acts.at(0, px);
    for (int c = 1; c < acts.classes; ++c) top = std::max<long double>(top, acts.at(c, px));
    long double sum = 0.0L;
    for (int c = 0; c < acts.classes; ++c) sum += std::exp(static_cast<long double>(acts.at(c, px)) - top);
    const long double nll = top + std::log(sum) - acts.at(label, px);
    total += pixel_weight(mode, omega, label, argmax(probs)) * std::min<long double>(nll, kMaxNll);
  }
  return total / static_cast<long double>(acts.pixels());
}

} // namespace

double gradient_check(const ActivationField& acts, const LabelField& labels, Weighting mode, double h,
                      double abs_floor) {
  const LossResult analytic = xent_loss(acts, labels, mode);
  ActivationField probe = acts;
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.data.size(); ++i) {
    const double orig = probe.data[i];
    const double hi = orig + h;
    const double lo = orig - h;
    probe.data[i] = hi;
    const long double up = loss_extended(probe, labels, mode);
    probe.data[i] = lo;
    const long double down = loss_extended(probe, labels, mode);
    probe.data[i] = orig;
    const double fd = static_cast<double>((up - down) / (static_cast<long double>(hi) - lo));
    const double g = analytic.gradient.data[i];
    const double scale = std::max(std::abs(g), std::abs(fd));
    if (scale < abs_floor) continue;
    worst = std::max(worst, std::abs(g - fd) / scale);
  }
  return worst;
}

} // namespace sketchgraph::segloss
