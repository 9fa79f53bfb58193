// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "calprompt/types.hpp"

namespace calprompt {

// L x L counts, rows = gold, columns = predicted.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_labels = 0)
      : n_(num_labels), counts_(num_labels * num_labels, 0) {}

  static ConfusionMatrix from(std::span<const std::size_t> preds,
                              std::span<const std::size_t> golds, std::size_t num_labels);

  void add(std::size_t gold, std::size_t pred);
  // Element-wise sum; aggregation is order-insensitive.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  std::size_t num_labels() const noexcept { return n_; }
  std::uint64_t at(std::size_t gold, std::size_t pred) const { return counts_[gold * n_ + pred]; }
  std::uint64_t total() const noexcept;
  std::uint64_t correct() const noexcept;
  std::uint64_t support(std::size_t label) const;    // row sum
  std::uint64_t predicted(std::size_t label) const;  // column sum

  double accuracy() const;
  // Per-class F1; a class whose precision+recall denominator vanishes scores 0.
  double class_f1(std::size_t label) const;
  double macro_f1() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

enum class F1Variant { Macro, Micro, Binary };

double accuracy(std::span<const std::size_t> preds, std::span<const std::size_t> golds);
double macro_f1(std::span<const std::size_t> preds, std::span<const std::size_t> golds,
                std::size_t num_labels);
// Binary F1 scores label index 1 as the positive class and requires L = 2.
// Micro F1 equals accuracy for single-label classification.
double f1_score(std::span<const std::size_t> preds, std::span<const std::size_t> golds,
                std::size_t num_labels, F1Variant variant);

struct ThresholdPoint {
  double tau = 0.0;
  double accuracy = 0.0;
};

struct ThresholdCurve {
  std::vector<ThresholdPoint> grid;
  double best_tau = 0.0;
  double best_accuracy = 0.0;
};

// Accuracy of "positive iff pos_prob >= tau" over tau = 0, step, 2*step, ..., 1.
// When 1/step is an integer n the grid points are exactly i/n, so sweeps at
// step and step/2 share bit-identical tau values.
ThresholdCurve threshold_sweep(std::span<const double> pos_probs,
                               std::span<const std::size_t> golds, double grid_step = 0.01);

enum class PositiveScore { Raw, PairRatio };

// Positive-class probability used by the sweep. PairRatio is p_pos/(p_pos+p_neg)
// for a two-word label set.
double positive_probability(std::span<const double> probs, std::size_t positive_index,
                            PositiveScore mode);

F1Variant parse_f1_variant(std::string_view s);
std::string_view to_string(F1Variant v);

}  // namespace calprompt
