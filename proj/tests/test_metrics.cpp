// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "calprompt/calibration.hpp"
#include "calprompt/errors.hpp"
#include "calprompt/evaluate.hpp"
#include "calprompt/metrics.hpp"
#include "oracles.hpp"

using namespace calprompt;
using Labels = std::vector<std::size_t>;

TEST_CASE("accuracy") {
  const Labels g{0, 0, 1, 1};
  CHECK(accuracy(g, g) == 1.0);
  CHECK(accuracy(Labels{0, 1, 1, 1}, g) == 0.75);
  CHECK(accuracy(Labels{1, 1, 0, 0}, g) == 0.0);
  CHECK_THROWS_AS(accuracy(Labels{0}, g), DimensionError);
  CHECK_THROWS_AS(accuracy(Labels{}, Labels{}), PreconditionError);
}

TEST_CASE("macro_f1 against a hand-built confusion matrix") {
  // golds [0,0,1,1], preds [0,1,1,1]:
  //   class 0: tp 1, fp 0, fn 1 -> P 1, R 1/2, F1 2/3
  //   class 1: tp 2, fp 1, fn 0 -> P 2/3, R 1, F1 4/5
  const double hand = (oracle::f1_from_counts(1, 0, 1) + oracle::f1_from_counts(2, 1, 0)) / 2;
  CHECK(hand == doctest::Approx(0.733333333333).epsilon(1e-12));
  const double got = macro_f1(Labels{0, 1, 1, 1}, Labels{0, 0, 1, 1}, 2);
  CHECK(std::abs(got - hand) <= 1e-12);
  CHECK(std::abs(got - 11.0 / 15.0) <= 1e-12);
}

TEST_CASE("macro_f1 edge cases") {
  const Labels g{0, 1, 2, 2, 1};
  CHECK(macro_f1(g, g, 3) == 1.0);
  // class 2 never occurs and is never predicted: contributes 0
  const Labels two{0, 1, 1, 0};
  CHECK(macro_f1(two, two, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // all-one-class predictor
  CHECK(macro_f1(Labels{0, 0, 0, 0}, Labels{0, 0, 1, 1}, 2) ==
        doctest::Approx(oracle::f1_from_counts(2, 2, 0) / 2));
  CHECK_THROWS_AS(macro_f1(Labels{0, 3}, Labels{0, 1}, 2), PreconditionError);
}

TEST_CASE("F1 variants") {
  const Labels p{0, 1, 1, 1}, g{0, 0, 1, 1};
  CHECK(f1_score(p, g, 2, F1Variant::Micro) == 0.75);
  CHECK(f1_score(p, g, 2, F1Variant::Binary) == doctest::Approx(0.8));
  CHECK(f1_score(p, g, 2, F1Variant::Macro) == doctest::Approx(11.0 / 15.0));
  CHECK_THROWS_AS(f1_score(Labels{0, 1, 2}, Labels{0, 1, 2}, 3, F1Variant::Binary),
                  PreconditionError);
  CHECK(parse_f1_variant("binary") == F1Variant::Binary);
  CHECK_THROWS_AS(parse_f1_variant("weighted"), PreconditionError);
}

TEST_CASE("confusion matrix bookkeeping") {
  auto cm = ConfusionMatrix::from(Labels{0, 1, 1, 1}, Labels{0, 0, 1, 1}, 2);
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 1) == 2);
  CHECK(cm.at(1, 0) == 0);
  CHECK(cm.total() == 4);
  CHECK(cm.support(0) == 2);
  CHECK(cm.predicted(1) == 3);
  auto other = ConfusionMatrix::from(Labels{1}, Labels{0}, 2);
  cm += other;
  CHECK(cm.at(0, 1) == 2);
  CHECK(cm.total() == 5);
}

TEST_CASE("property: metrics are invariant to relabelling") {
  oracle::TestRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 2 + rng.index(5), n = 1 + rng.index(60);
    Labels p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.index(L);
      g[i] = rng.index(L);
    }
    Labels perm(L);
    for (std::size_t i = 0; i < L; ++i) perm[i] = i;
    for (std::size_t i = L; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    Labels pp(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pp[i] = perm[p[i]];
      gp[i] = perm[g[i]];
    }
    CHECK(accuracy(p, g) == accuracy(pp, gp));
    CHECK(macro_f1(p, g, L) == doctest::Approx(macro_f1(pp, gp, L)).epsilon(1e-14));

    const auto cm = ConfusionMatrix::from(p, g, L);
    const double f1 = cm.macro_f1();
    CHECK(f1 <= 1.0);
    bool diagonal = true, all_support = true;
    for (std::size_t a = 0; a < L; ++a) {
      all_support &= cm.support(a) > 0;
      for (std::size_t b = 0; b < L; ++b) diagonal &= (a == b || cm.at(a, b) == 0);
    }
    CHECK((f1 == 1.0) == (diagonal && all_support));
  }
}

TEST_CASE("property: balanced binary accuracy is the mean of TPR and TNR") {
  oracle::TestRng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t half = 1 + rng.index(30);
    Labels g, p;
    for (std::size_t i = 0; i < 2 * half; ++i) {
      g.push_back(i < half ? 0 : 1);
      p.push_back(rng.index(2));
    }
    const auto cm = ConfusionMatrix::from(p, g, 2);
    const double tpr = static_cast<double>(cm.at(1, 1)) / static_cast<double>(cm.support(1));
    const double tnr = static_cast<double>(cm.at(0, 0)) / static_cast<double>(cm.support(0));
    CHECK(accuracy(p, g) == doctest::Approx((tpr + tnr) / 2).epsilon(1e-14));
  }
}

TEST_CASE("threshold_sweep fixtures") {
  const std::vector<double> pos{0.97, 0.95};
  const Labels g{1, 0};
  const auto curve = threshold_sweep(pos, g, 0.01);
  REQUIRE(curve.grid.size() == 101);
  CHECK(curve.grid[96].tau == 0.96);
  CHECK(curve.grid[96].accuracy == 1.0);
  CHECK(curve.grid[50].tau == 0.5);
  CHECK(curve.grid[50].accuracy == 0.5);
  CHECK(curve.best_accuracy == 1.0);
  CHECK(curve.best_tau == 0.96);

  const auto all_pos = threshold_sweep(std::vector<double>{0.2, 0.7, 0.0}, Labels{1, 1, 1}, 0.01);
  CHECK(all_pos.grid[0].accuracy == 1.0);
  CHECK(all_pos.best_tau == 0.0);
}

TEST_CASE("threshold_sweep errors and grid shape") {
  CHECK_THROWS_AS(threshold_sweep(std::vector<double>{0.5}, Labels{2}, 0.01), PreconditionError);
  CHECK_THROWS_AS(threshold_sweep(std::vector<double>{0.5}, Labels{1}, 0.0), PreconditionError);
  CHECK_THROWS_AS(threshold_sweep(std::vector<double>{0.5}, Labels{1}, 0.6), PreconditionError);
  const auto odd = threshold_sweep(std::vector<double>{0.5}, Labels{1}, 0.3);
  REQUIRE(odd.grid.size() == 5);
  CHECK(odd.grid.back().tau == 1.0);
  for (std::size_t i = 1; i < odd.grid.size(); ++i) CHECK(odd.grid[i].tau > odd.grid[i - 1].tau);
}

TEST_CASE("property: sweep at g and g/2 agree on shared points") {
  oracle::TestRng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(200);
    std::vector<double> pos(n);
    Labels g(n);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = rng.uniform();
      g[i] = rng.index(2);
    }
    const auto coarse = threshold_sweep(pos, g, 0.02);
    const auto fine = threshold_sweep(pos, g, 0.01);
    for (std::size_t i = 0; i < coarse.grid.size(); ++i) {
      CHECK(coarse.grid[i].tau == fine.grid[2 * i].tau);
      CHECK(coarse.grid[i].accuracy == fine.grid[2 * i].accuracy);
    }
  }
}

TEST_CASE("property: sweep optimum matches an exhaustive threshold scan") {
  oracle::TestRng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(500);
    std::vector<double> pos(n);
    Labels g(n);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = static_cast<double>(rng.index(101)) / 100.0;  // on the 0.01 lattice
      g[i] = rng.index(2);
    }
    const auto curve = threshold_sweep(pos, g, 0.01);
    const double max_score = *std::max_element(pos.begin(), pos.end());
    const auto [best_acc, best_t] = oracle::exhaustive_threshold(pos, g, max_score < 1.0);
    CHECK(curve.best_accuracy == best_acc);
    // the sweep's smallest optimal tau lies in (previous distinct score, best_t]
    double prev = -1.0;
    for (double v : pos) {
      if (v < best_t) prev = std::max(prev, v);
    }
    CHECK(curve.best_tau > prev);
    CHECK(curve.best_tau <= best_t);
  }
}

TEST_CASE("positive_probability") {
  CHECK(positive_probability(Vector{0.05, 0.9}, 1, PositiveScore::Raw) == 0.9);
  CHECK(positive_probability(Vector{0.1, 0.3}, 1, PositiveScore::PairRatio) == doctest::Approx(0.75));
  CHECK_THROWS_AS(positive_probability(Vector{0.1, 0.3}, 2, PositiveScore::Raw), PreconditionError);
}

namespace {

TaskManifest manifest(std::size_t L, MetricKind metric = MetricKind::Accuracy) {
  TaskManifest m;
  m.task = "t";
  for (std::size_t i = 0; i < L; ++i) {
    m.labels.push_back("l" + std::to_string(i));
    m.label_words.push_back("w" + std::to_string(i));
  }
  m.metric = metric;
  m.balanced = metric == MetricKind::Accuracy;
  return m;
}

LabelProbRecord rec(std::size_t gold, Vector probs, std::string lang = {}) {
  LabelProbRecord r;
  r.example_id = "x";
  r.gold = gold;
  r.probs = std::move(probs);
  r.language = std::move(lang);
  return r;
}

}  // namespace

TEST_CASE("evaluate fixtures") {
  const std::vector<LabelProbRecord> easy{rec(0, {0.7, 0.2}), rec(1, {0.1, 0.6})};
  CHECK(evaluate(easy, CalibratorSpec{}, manifest(2)).metric == 1.0);

  CalibratorSpec pen;
  pen.method = Method::Penalty;
  pen.penalty = {0.92, 0.08};
  const std::vector<LabelProbRecord> one{rec(1, {0.85, 0.15})};
  const auto r = evaluate(one, pen, manifest(2));
  CHECK(r.predictions == Labels{1});
  CHECK(r.metric == 1.0);

  CalibratorSpec cbm;
  cbm.method = Method::Cbm;
  const std::vector<LabelProbRecord> same{rec(0, {0.3, 0.6}), rec(1, {0.3, 0.6})};
  const auto c = evaluate(same, cbm, manifest(2));
  CHECK(c.predictions == Labels{0, 0});
  CHECK(c.cbm_means.size() == 2);
}

TEST_CASE("evaluate uses the manifest metric") {
  const std::vector<LabelProbRecord> recs{rec(0, {0.6, 0.3}), rec(0, {0.2, 0.7}), rec(1, {0.1, 0.8}),
                                          rec(1, {0.2, 0.7})};
  CHECK(evaluate(recs, CalibratorSpec{}, manifest(2)).metric == 0.75);
  CHECK(evaluate(recs, CalibratorSpec{}, manifest(2, MetricKind::MacroF1)).metric ==
        doctest::Approx(11.0 / 15.0));
  EvalOptions binary;
  binary.f1 = F1Variant::Binary;
  CHECK(evaluate(recs, CalibratorSpec{}, manifest(2, MetricKind::MacroF1), binary).metric ==
        doctest::Approx(0.8));
}

TEST_CASE("property: NONE equals PENALTY with a zero penalty") {
  oracle::TestRng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 + rng.index(5), n = 1 + rng.index(50);
    std::vector<LabelProbRecord> recs;
    for (std::size_t i = 0; i < n; ++i) recs.push_back(rec(rng.index(L), rng.prob_vector(L, 0.9)));
    CalibratorSpec pen;
    pen.method = Method::Penalty;
    pen.penalty.assign(L, 0.0);
    const auto a = evaluate(recs, CalibratorSpec{}, manifest(L));
    const auto b = evaluate(recs, pen, manifest(L));
    CHECK(a.predictions == b.predictions);
    CHECK(a.metric == b.metric);
  }
}

TEST_CASE("evaluate errors") {
  CHECK_THROWS_AS(evaluate({}, CalibratorSpec{}, manifest(2)), PreconditionError);
  const std::vector<LabelProbRecord> bad{rec(0, {0.3, 0.3, 0.3})};
  CHECK_THROWS_AS(evaluate(bad, CalibratorSpec{}, manifest(2)), DimensionError);
}

TEST_CASE("evaluate_by_language evaluates each language separately") {
  auto m = manifest(2);
  m.language = "en";
  const std::vector<LabelProbRecord> recs{rec(0, {0.6, 0.3}, "af"), rec(1, {0.6, 0.3}, "af"),
                                          rec(1, {0.1, 0.8}), rec(0, {0.7, 0.2})};
  const auto by = evaluate_by_language(recs, CalibratorSpec{}, m);
  REQUIRE(by.size() == 2);
  CHECK(by.at("af").metric == 0.5);
  CHECK(by.at("en").metric == 1.0);
}
