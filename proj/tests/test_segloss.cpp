#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sketchgraph/segloss.hpp"

using namespace sketchgraph;
using namespace sketchgraph::segloss;

namespace {

LabelField labels_with(int w, int h, std::vector<int> data) { return LabelField{w, h, std::move(data)}; }

ActivationField random_acts(std::mt19937_64& rng, int k, int w, int h, double spread) {
  std::normal_distribution<double> n(0.0, spread);
  ActivationField a(k, w, h);
  for (double& v : a.data) v = n(rng);
  return a;
}

LabelField random_labels(std::mt19937_64& rng, int k, int w, int h) {
  std::uniform_int_distribution<int> c(0, k - 1);
  LabelField l{w, h, std::vector<int>(static_cast<std::size_t>(w) * h)};
  for (int& v : l.data) v = c(rng);
  return l;
}

// Activations whose argmax reproduces the labels exactly.
ActivationField confident(const LabelField& l, int k, double margin) {
  ActivationField a(k, l.width, l.height, -margin);
  for (std::size_t p = 0; p < l.pixels(); ++p) a.at(l.data[p], p) = margin;
  return a;
}

} // namespace

TEST_SUITE("segloss") {

TEST_CASE("class weights") {
  SUBCASE("balanced halves") {
    std::vector<int> d(100, 0);
    std::fill(d.begin() + 50, d.end(), 1);
    const auto w = class_weights(labels_with(10, 10, d), 2);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.5));
  }
  SUBCASE("90/10 split favors the rare class") {
    std::vector<int> d(100, 0);
    std::fill(d.begin() + 90, d.end(), 1);
    const auto w = class_weights(labels_with(10, 10, d), 2);
    CHECK(w[0] == doctest::Approx(0.1));
    CHECK(w[1] == doctest::Approx(0.9));
  }
  SUBCASE("absent class is floored and weights sum to one") {
    std::vector<int> d(256, 0);
    std::fill(d.begin() + 128, d.end(), 2);
    const auto w = class_weights(labels_with(16, 16, d), 3);
    // Frequencies 1/2, 1/256, 1/2 give inverse weights 2, 256, 2.
    CHECK(w[1] == doctest::Approx(256.0 / 260.0));
    CHECK(w[0] == doctest::Approx(2.0 / 260.0));
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
    for (double v : w) CHECK(std::isfinite(v));
  }
  SUBCASE("relabeling classes permutes the weights") {
    std::mt19937_64 rng(31);
    const int perm[3] = {2, 0, 1};
    for (int trial = 0; trial < 50; ++trial) {
      LabelField l = random_labels(rng, 3, 7, 5);
      if (trial % 3 == 0) std::replace(l.data.begin(), l.data.end(), 1, 0);
      LabelField p = l;
      for (int& v : p.data) v = perm[v];
      const auto wl = class_weights(l, 3), wp = class_weights(p, 3);
      for (int c = 0; c < 3; ++c) CHECK(wp[perm[c]] == doctest::Approx(wl[c]).epsilon(1e-14));
    }
  }
  SUBCASE("label out of range") {
    CHECK_THROWS_AS(class_weights(labels_with(2, 1, {0, 3}), 3), Error);
  }
}

TEST_CASE("loss values") {
  SUBCASE("confident correct prediction has negligible loss") {
    const LabelField l = labels_with(2, 2, {0, 1, 2, 1});
    for (Weighting m : {Weighting::plain, Weighting::balanced, Weighting::max_weighted})
      CHECK(xent_loss(confident(l, 3, 40.0), l, m).loss < 1e-12);
  }
  SUBCASE("uniform activations give log K") {
    const LabelField l = labels_with(3, 1, {0, 1, 2});
    CHECK(xent_loss(ActivationField(3, 3, 1, 0.7), l, Weighting::plain).loss == doctest::Approx(std::log(3.0)));
  }
  SUBCASE("probabilities are floored at 1e-12") {
    const LabelField l = labels_with(1, 1, {0});
    ActivationField a(3, 1, 1);
    a.at(0, 0) = -500.0;
    a.at(1, 0) = 500.0;
    CHECK(xent_loss(a, l, Weighting::plain).loss == doctest::Approx(-std::log(1e-12)));
  }
  SUBCASE("agrees with the long-double oracle") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 40; ++trial) {
      const ActivationField a = random_acts(rng, 3, 6, 5, 3.0);
      const LabelField l = random_labels(rng, 3, 6, 5);
      for (Weighting m : {Weighting::plain, Weighting::balanced, Weighting::max_weighted}) {
        const double want = static_cast<double>(oracle::xent(a, l, m));
        CHECK(xent_loss(a, l, m).loss == doctest::Approx(want).epsilon(1e-12));
        CHECK(xent_value(a, l, m) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(xent_loss(ActivationField(3, 2, 2), labels_with(3, 1, {0, 0, 0}), Weighting::plain), Error);
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const ActivationField a = random_acts(rng, 3, 8, 8, 2.0);
    const LabelField l = random_labels(rng, 3, 8, 8);
    for (Weighting m : {Weighting::plain, Weighting::balanced, Weighting::max_weighted}) {
      const LossResult r = xent_loss(a, l, m);
      const auto fd = oracle::finite_difference(a, l, m, 1e-6);
      CHECK(oracle::max_relative_error(r.gradient.data, fd, 1e-9) <= 1e-4);
      CHECK(gradient_check(a, l, m) <= 1e-4);
    }
  }
}

TEST_CASE("max-weighted loss bounds the balanced loss") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 2 + trial % 7, h = 2 + trial % 5;
    const ActivationField a = random_acts(rng, 3, w, h, 4.0);
    const LabelField l = random_labels(rng, 3, w, h);
    const double mwx = xent_loss(a, l, Weighting::max_weighted).loss;
    const double bal = xent_loss(a, l, Weighting::balanced).loss;
    CHECK(mwx >= bal);
    CHECK(bal >= 0.0);
    CHECK(xent_loss(a, l, Weighting::plain).loss >= 0.0);

    // When the prediction equals the label the two weightings coincide.
    const ActivationField c = confident(l, 3, 1.0 + trial % 3);
    CHECK(xent_loss(c, l, Weighting::max_weighted).loss == xent_loss(c, l, Weighting::balanced).loss);
  }
}

} // TEST_SUITE
