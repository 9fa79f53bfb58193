// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/evaluate.hpp"

#include "calprompt/calibration.hpp"
#include "calprompt/errors.hpp"

namespace calprompt {

double manifest_metric(const ConfusionMatrix& cm, const TaskManifest& manifest, F1Variant f1) {
  if (manifest.metric == MetricKind::Accuracy) return cm.accuracy();
  switch (f1) {
    case F1Variant::Macro:
      return cm.macro_f1();
    case F1Variant::Micro:
      return cm.accuracy();
    case F1Variant::Binary:
      if (cm.num_labels() != 2) throw PreconditionError("binary F1 requires exactly 2 labels");
      return cm.class_f1(1);
  }
  return 0.0;
}

EvalResult evaluate(std::span<const LabelProbRecord> records, const CalibratorSpec& spec,
                    const TaskManifest& manifest, const EvalOptions& options) {
  if (records.empty()) throw PreconditionError("evaluate: no records");
  const std::size_t num_labels = manifest.num_labels();
  check_spec(spec, num_labels);

  Matrix probs;
  probs.reserve(records.size());
  for (const auto& r : records) {
    if (r.probs.size() != num_labels) {
      throw DimensionError("evaluate: record '" + r.example_id + "' has " +
                           std::to_string(r.probs.size()) + " probabilities, manifest has " +
                           std::to_string(num_labels) + " labels");
    }
    probs.push_back(r.probs);
  }

  EvalResult result;
  result.scores = calibrate_all(probs, spec, options.numeric, &result.cbm_means);
  result.confusion = ConfusionMatrix(num_labels);
  result.predictions.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t pred = predict(result.scores[i]);
    result.predictions.push_back(pred);
    result.confusion.add(records[i].gold, pred);
  }
  result.metric = manifest_metric(result.confusion, manifest, options.f1);
  return result;
}

std::map<std::string, EvalResult> evaluate_by_language(std::span<const LabelProbRecord> records,
                                                       const CalibratorSpec& spec,
                                                       const TaskManifest& manifest,
                                                       const EvalOptions& options) {
  std::map<std::string, std::vector<LabelProbRecord>> groups;
  for (const auto& r : records) {
    groups[r.language.empty() ? manifest.language : r.language].push_back(r);
  }
  std::map<std::string, EvalResult> out;
  for (const auto& [lang, subset] : groups) {
    out.emplace(lang, evaluate(subset, spec, manifest, options));
  }
  return out;
}

}  // namespace calprompt
