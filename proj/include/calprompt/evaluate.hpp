// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "calprompt/metrics.hpp"
#include "calprompt/types.hpp"

namespace calprompt {

struct EvalOptions {
  NumericPolicy numeric;
  F1Variant f1 = F1Variant::Macro;
};

struct EvalResult {
  double metric = 0.0;
  ConfusionMatrix confusion;
  std::vector<std::size_t> predictions;
  Matrix scores;
  Vector cbm_means;  // populated for CBM only
};

// Calibrate, predict and score `records` under the manifest's metric. CBM
// takes its means from `records` as a whole.
EvalResult evaluate(std::span<const LabelProbRecord> records, const CalibratorSpec& spec,
                    const TaskManifest& manifest, const EvalOptions& options = {});

// Metric of a finished confusion matrix under the manifest's convention.
double manifest_metric(const ConfusionMatrix& cm, const TaskManifest& manifest, F1Variant f1);

// Per-language evaluation. Each language is its own evaluated set; records
// without a language tag fall under the manifest's language.
std::map<std::string, EvalResult> evaluate_by_language(std::span<const LabelProbRecord> records,
                                                       const CalibratorSpec& spec,
                                                       const TaskManifest& manifest,
                                                       const EvalOptions& options = {});

}  // namespace calprompt
