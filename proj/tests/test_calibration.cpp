// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "calprompt/calibration.hpp"
#include "calprompt/errors.hpp"
#include "oracles.hpp"

using namespace calprompt;

TEST_CASE("apply_cc divides by the mask-only prior") {
  const Vector probs{0.6, 0.4}, prior{0.92, 0.08};
  const auto q = apply_cc(probs, prior);
  CHECK(q[0] == doctest::Approx(0.6 / 0.92).epsilon(1e-12));
  CHECK(q[0] == doctest::Approx(0.65217).epsilon(1e-5));
  CHECK(q[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(predict(q) == 1);
}

TEST_CASE("apply_cc with uniform prior keeps the raw argmax") {
  const auto q = apply_cc(Vector{0.3, 0.7}, Vector{0.5, 0.5});
  CHECK(q[0] == doctest::Approx(0.6));
  CHECK(q[1] == doctest::Approx(1.4));
  CHECK(predict(q) == predict(Vector{0.3, 0.7}));

  const auto tie = apply_cc(Vector{0.25, 0.25}, Vector{0.5, 0.5});
  CHECK(tie[0] == 0.5);
  CHECK(tie[1] == 0.5);
  CHECK(predict(tie) == 0);
}

TEST_CASE("apply_cc adds the bias") {
  const auto q = apply_cc(Vector{0.5, 0.5}, Vector{0.5, 0.5}, Vector{0.25, -0.25});
  CHECK(q[0] == 1.25);
  CHECK(q[1] == 0.75);
}

TEST_CASE("apply_cc errors") {
  CHECK_THROWS_AS(apply_cc(Vector{0.5, 0.5}, Vector{0.5}), DimensionError);
  CHECK_THROWS_AS(apply_cc(Vector{0.5, 0.5}, Vector{0.5, 0.5}, Vector{0.0}), DimensionError);
  NumericPolicy strict{true, 1e-12};
  CHECK_THROWS_AS(apply_cc(Vector{0.5, 0.5}, Vector{0.0, 1.0}, strict), DomainError);
  // default policy floors the zero prior instead
  const auto q = apply_cc(Vector{0.5, 0.5}, Vector{0.0, 1.0});
  CHECK(q[0] == doctest::Approx(0.5 / 1e-12));
}

TEST_CASE("apply_pmi is the log ratio to the template prior") {
  const auto q = apply_pmi(Vector{0.8, 0.2}, Vector{0.5, 0.5});
  CHECK(q[0] == doctest::Approx(std::log(1.6)).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(std::log(0.4)).epsilon(1e-12));
  CHECK(q[0] == doctest::Approx(0.4700).epsilon(1e-4));
  CHECK(q[1] == doctest::Approx(-0.9163).epsilon(1e-4));

  const Vector p{0.1, 0.3, 0.05};
  for (double v : apply_pmi(p, p)) CHECK(v == 0.0);

  const Vector probs{0.6, 0.4}, prior{0.92, 0.08};
  CHECK(predict(apply_pmi(probs, prior)) == 1);
  CHECK(predict(apply_pmi(probs, prior)) == predict(apply_cc(probs, prior)));
}

TEST_CASE("apply_pmi strict mode rejects zeros") {
  NumericPolicy strict{true, 1e-12};
  CHECK_THROWS_AS(apply_pmi(Vector{0.0, 0.5}, Vector{0.5, 0.5}, strict), DomainError);
  CHECK_THROWS_AS(apply_pmi(Vector{0.5, 0.5}, Vector{0.5, 0.0}, strict), DomainError);
  CHECK_NOTHROW(apply_pmi(Vector{0.0, 0.5}, Vector{0.5, 0.5}));
  CHECK_THROWS_AS(apply_pmi(Vector{0.5}, Vector{0.5, 0.5}), DimensionError);
}

TEST_CASE("apply_cbm divides by column means") {
  const auto r = apply_cbm(Matrix{{0.9, 0.1}, {0.5, 0.5}});
  CHECK(r.means[0] == doctest::Approx(0.7));
  CHECK(r.means[1] == doctest::Approx(0.3));
  CHECK(r.scores[0][0] == doctest::Approx(1.28571).epsilon(1e-5));
  CHECK(r.scores[0][1] == doctest::Approx(0.33333).epsilon(1e-5));
  CHECK(r.scores[1][0] == doctest::Approx(0.71429).epsilon(1e-5));
  CHECK(r.scores[1][1] == doctest::Approx(1.66667).epsilon(1e-5));
}

TEST_CASE("apply_cbm on identical rows gives ones") {
  const auto r = apply_cbm(Matrix(7, Vector{0.2, 0.05, 0.6}));
  for (const auto& row : r.scores) {
    for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("apply_cbm errors") {
  CHECK_THROWS_AS(apply_cbm(Matrix{}), PreconditionError);
  NumericPolicy strict{true, 1e-12};
  CHECK_THROWS_AS(apply_cbm(Matrix{{0.0, 0.5}, {0.0, 0.1}}, strict), DomainError);
  CHECK_THROWS_AS(apply_cbm(Matrix{{0.1, 0.5}, {0.2}}), DimensionError);
}

TEST_CASE("apply_cbm means do not depend on row order") {
  oracle::TestRng rng(99);
  Matrix rows;
  for (int i = 0; i < 257; ++i) rows.push_back(rng.prob_vector(4, 0.7));
  const auto base = apply_cbm(rows).means;
  std::mt19937 shuffle_rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(rows.begin(), rows.end(), shuffle_rng);
    const auto m = apply_cbm(rows).means;
    for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[j] == base[j]);
  }
}

TEST_CASE("apply_penalty subtracts") {
  const Vector p{0.3, 0.2, 0.5};
  CHECK(apply_penalty(p, Vector(3, 0.0)) == p);

  const auto cancel = apply_penalty(Vector{0.92, 0.08}, Vector{0.92, 0.08});
  CHECK(cancel[0] == 0.0);
  CHECK(cancel[1] == 0.0);
  CHECK(predict(cancel) == 0);

  const auto flip = apply_penalty(Vector{0.85, 0.15}, Vector{0.92, 0.08});
  CHECK(flip[0] == doctest::Approx(-0.07));
  CHECK(flip[1] == doctest::Approx(0.07));
  CHECK(predict(flip) == 1);
  CHECK(predict(Vector{0.85, 0.15}) == 0);

  CHECK_THROWS_AS(apply_penalty(Vector{0.1}, Vector{0.1, 0.2}), DimensionError);
}

TEST_CASE("predict takes the lowest index among maxima") {
  CHECK(predict(Vector{0.1, 0.9}) == 1);
  CHECK(predict(Vector{0.5, 0.5}) == 0);
  CHECK(predict(Vector{-0.07, 0.07}) == 1);
  CHECK(predict(Vector{0.2, 0.7, 0.7}) == 1);
  CHECK_THROWS_AS(predict(Vector{0.1, std::nan("")}), DomainError);
  CHECK_THROWS_AS(predict(Vector{}), PreconditionError);
}

TEST_CASE("property: CC argmax is invariant to prior scaling") {
  oracle::TestRng rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng.index(8);
    const auto p = rng.prob_vector(n, 0.5);
    const auto prior = rng.prob_vector(n, 0.9);
    Vector scaled = prior;
    const double c = 0.01 + 10 * rng.uniform();
    for (auto& v : scaled) v *= c;
    CHECK(predict(apply_cc(p, prior)) == predict(apply_cc(p, scaled)));
  }
}

TEST_CASE("property: CC and PMI agree on argmax; uniform prior is neutral") {
  oracle::TestRng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.index(8);
    const auto p = rng.prob_vector(n, rng.uniform());
    const auto prior = rng.prob_vector(n, 0.95);
    CHECK(predict(apply_cc(p, prior)) == predict(apply_pmi(p, prior)));
    const Vector uniform(n, 1.0 / static_cast<double>(n));
    CHECK(predict(apply_cc(p, uniform)) == predict(p));
    CHECK(predict(apply_pmi(p, uniform)) == predict(p));
  }
}

TEST_CASE("property: CBM columns average to one") {
  oracle::TestRng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(300), width = 2 + rng.index(9);
    Matrix rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(rng.prob_vector(width, rng.uniform()));
    const auto r = apply_cbm(rows);
    for (std::size_t j = 0; j < width; ++j) {
      double s = 0.0;
      for (const auto& row : r.scores) s += row[j];
      CHECK(std::abs(s / static_cast<double>(n) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("property: predict is deterministic") {
  oracle::TestRng rng(17);
  for (int i = 0; i < 200; ++i) {
    auto v = rng.prob_vector(5);
    if (i % 3 == 0) v[3] = v[1];
    CHECK(predict(v) == predict(Vector(v)));
  }
}

TEST_CASE("make_zero_shot picks the documented prior per method") {
  const PriorProfile priors{{0.92, 0.08}, {0.6, 0.4}};
  const auto cc = make_zero_shot(Method::CC, priors);
  CHECK(cc.cc_w[0] == doctest::Approx(1 / 0.92));
  CHECK(cc.cc_b == Vector{0.0, 0.0});
  CHECK(make_zero_shot(Method::Penalty, priors).penalty == priors.mask_only);
  CHECK(make_zero_shot(Method::PmiDc, priors).pmi_prior == priors.empty_template);
  CHECK(make_zero_shot(Method::PmiDc, priors, {}, PriorSource::MaskOnly).pmi_prior ==
        priors.mask_only);
  CHECK(make_zero_shot(Method::Penalty, priors, {}, PriorSource::EmptyTemplate).penalty ==
        priors.empty_template);
}

TEST_CASE("calibrate_all matches the per-record transforms") {
  const PriorProfile priors{{0.92, 0.08}, {0.6, 0.4}};
  const Matrix probs{{0.6, 0.4}, {0.85, 0.15}, {0.3, 0.2}};
  const auto cc = calibrate_all(probs, make_zero_shot(Method::CC, priors));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto ref = apply_cc(probs[i], priors.mask_only);
    CHECK(cc[i][0] == doctest::Approx(ref[0]).epsilon(1e-14));
    CHECK(cc[i][1] == doctest::Approx(ref[1]).epsilon(1e-14));
  }
  Vector means;
  const auto cbm = calibrate_all(probs, make_zero_shot(Method::Cbm, priors), {}, &means);
  CHECK(means.size() == 2);
  CHECK(cbm == apply_cbm(probs).scores);
  CHECK(calibrate_all(probs, CalibratorSpec{}) == probs);
}

TEST_CASE("check_spec rejects malformed calibrators") {
  CalibratorSpec cc;
  cc.method = Method::CC;
  cc.cc_w = {1.0, 2.0};
  cc.cc_b = {0.0};
  CHECK_THROWS_AS(check_spec(cc, 2), DimensionError);
  cc.cc_b = {0.0, 0.0};
  CHECK_NOTHROW(check_spec(cc, 2));
  cc.cc_w = {1.0, -1.0};
  CHECK_THROWS_AS(check_spec(cc, 2), DomainError);
  CalibratorSpec pen;
  pen.method = Method::Penalty;
  CHECK_THROWS_AS(check_spec(pen, 2), DimensionError);
}

TEST_CASE("renormalize rescales to unit mass") {
  const auto r = renormalize(Vector{0.2, 0.6});
  CHECK(r[0] == doctest::Approx(0.25));
  CHECK(r[1] == doctest::Approx(0.75));
}
