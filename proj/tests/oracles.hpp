// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

// Test-only reference implementations. None of these call into the library's
// calibration, training or metric code.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace calprompt::oracle {

struct Shot {
  std::vector<double> probs;
  std::size_t gold;
};

// Straight-line transcription of the few-shot penalty training loop:
//   for epoch: for (x, y) in D:
//     l_y = l - p; y_hat = argmax(l_y)
//     if y != y_hat: p[y_hat] += eta; p[y] -= eta
inline std::vector<double> penalty_training(const std::vector<Shot>& shots,
                                            std::vector<double> p, std::size_t epochs,
                                            double eta) {
  for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
    for (const Shot& s : shots) {
      std::vector<double> l = s.probs;
      std::vector<double> ly(l.size());
      for (std::size_t i = 0; i < l.size(); ++i) ly[i] = l[i] - p[i];
      std::size_t y_hat = 0;
      for (std::size_t i = 1; i < ly.size(); ++i) {
        if (ly[i] > ly[y_hat]) y_hat = i;
      }
      if (s.gold != y_hat) {
        p[y_hat] = p[y_hat] + eta;
        p[s.gold] = p[s.gold] - eta;
      }
    }
  }
  return p;
}

// Best accuracy of "positive iff score >= t" over every distinct score used
// as t, plus the all-negative rule (t above every score) when `allow_all_negative`.
// Returns {best accuracy, smallest threshold attaining it}; the all-negative
// rule reports threshold 2.0.
inline std::pair<double, double> exhaustive_threshold(const std::vector<double>& scores,
                                                      const std::vector<std::size_t>& golds,
                                                      bool allow_all_negative) {
  std::set<double> candidates(scores.begin(), scores.end());
  if (allow_all_negative) candidates.insert(2.0);
  double best_acc = -1.0, best_t = 0.0;
  for (double t : candidates) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      hits += static_cast<std::size_t>(scores[i] >= t ? 1 : 0) == golds[i];
    }
    const double acc = static_cast<double>(hits) / static_cast<double>(scores.size());
    if (acc > best_acc) {
      best_acc = acc;
      best_t = t;
    }
  }
  return {best_acc, best_t};
}

// Per-class F1 from explicit tp/fp/fn counts, zero when tp == 0.
inline double f1_from_counts(double tp, double fp, double fn) {
  if (tp == 0) return 0.0;
  const double p = tp / (tp + fp), r = tp / (tp + fn);
  return 2 * p * r / (p + r);
}

// Small deterministic generator for property tests (xorshift64*), distinct
// from the library's SplitMix64.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed ? seed : 0x1234567ull) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 2685821657736338717ull;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  // L probabilities summing to at most one: a random split of `mass`.
  std::vector<double> prob_vector(std::size_t n, double mass = 1.0) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
      x = uniform() + 1e-3;
      sum += x;
    }
    for (auto& x : w) x = x / sum * mass;
    return w;
  }

 private:
  std::uint64_t s_;
};

}  // namespace calprompt::oracle
