// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

/**
 * @file fewshot.hpp
 * @brief Perceptron-style few-shot training of the PENALTY and CC parameters,
 *        plus the (method x shots x seed) experiment grid.
 *
 * Training is one fixed-order pass over the shot set per epoch. On every
 * misprediction the parameters move by the learning rate toward the gold
 * label and away from the predicted one, so the parameter sum never changes.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calprompt/calibration.hpp"
#include "calprompt/evaluate.hpp"
#include "calprompt/types.hpp"

namespace calprompt {

inline constexpr std::array<std::uint64_t, 5> kDefaultSeeds{42, 421, 512, 1213, 1234};
inline constexpr std::array<std::size_t, 5> kDefaultShotCounts{1, 2, 4, 8, 16};
inline constexpr double kDefaultLearningRate = 1e-4;
inline constexpr std::size_t kDefaultEpochs = 10;

struct TrainConfig {
  std::size_t epochs = kDefaultEpochs;
  double learning_rate = kDefaultLearningRate;
  std::uint64_t seed = kDefaultSeeds[0];
  std::size_t shots = 1;  // per class unless shots_total
  bool shots_total = false;
  bool any_shot_count = false;  // lift the {1,2,4,8,16} restriction

  bool operator==(const TrainConfig&) const = default;
};

void validate(const TrainConfig& cfg);

struct ShotSet {
  std::vector<LabelProbRecord> shots;  // in processing order
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::vector<std::string> warnings;
};

// k records per class, drawn without replacement from each class's records in
// source order (partial Fisher-Yates), then the union is shuffled. A class
// with fewer than k records contributes all of them and a warning.
ShotSet sample_shots(std::span<const LabelProbRecord> train, std::size_t num_labels,
                     std::size_t k, std::uint64_t seed);

// k records in total, drawn without replacement from the whole split.
ShotSet sample_shots_total(std::span<const LabelProbRecord> train, std::size_t k,
                           std::uint64_t seed);

Vector train_penalty(std::span<const LabelProbRecord> shots, std::span<const double> init,
                     const TrainConfig& cfg);

struct CcParams {
  Vector weights;
  Vector bias;
};

// CC training keeps W = diag(prior)^-1 fixed and updates only the bias, with
// the same misprediction rule as PENALTY (bias of the gold label up, bias of
// the predicted label down).
CcParams train_cc(std::span<const LabelProbRecord> shots, std::span<const double> prior,
                  const TrainConfig& cfg, const NumericPolicy& policy = {});

struct GridOptions {
  std::vector<Method> methods{Method::Penalty, Method::CC};
  std::vector<std::size_t> shot_counts{kDefaultShotCounts.begin(), kDefaultShotCounts.end()};
  std::vector<std::uint64_t> seeds{kDefaultSeeds.begin(), kDefaultSeeds.end()};
  TrainConfig train;  // seed and shots are overridden per cell
  EvalOptions eval;
  std::optional<PriorSource> prior_source;
};

struct GridCell {
  Method method = Method::None;
  std::size_t shots = 0;  // 0 = zero-shot row
  std::vector<std::uint64_t> seeds;
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;
};

struct GridReport {
  std::string task;
  MetricKind metric = MetricKind::Accuracy;
  std::vector<GridCell> cells;  // ordered by (method, shots)
  std::vector<std::string> warnings;
};

// Trained calibrator for one (method, k, seed) cell; k = 0 gives the zero-shot
// calibrator.
CalibratorSpec train_calibrator(Method method, std::span<const LabelProbRecord> train,
                                const TaskManifest& manifest, const PriorProfile& priors,
                                std::size_t k, std::uint64_t seed, const GridOptions& options,
                                std::vector<std::string>* warnings = nullptr);

GridReport run_grid(const TaskManifest& manifest, std::span<const LabelProbRecord> records,
                    const PriorProfile& priors, const GridOptions& options);

// Cells as "mean_{std}" in percent with one decimal, rows = shot counts.
std::string render_grid_text(const GridReport& report);

}  // namespace calprompt
