// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace calprompt {

using Vector = std::vector<double>;
using Matrix = std::vector<Vector>;

inline constexpr const char* kEngineName = "calprompt";
inline constexpr const char* kEngineVersion = "0.1.0";

enum class Split { Train, Test };

// One example: gold label plus the raw mask-position probabilities of the L
// label words. The probabilities are a slice of the full-vocabulary softmax,
// so they need not sum to one.
struct LabelProbRecord {
  std::string example_id;
  std::size_t gold = 0;
  Vector probs;
  std::string language;  // empty when the record carries no language tag
  Split split = Split::Test;

  bool operator==(const LabelProbRecord&) const = default;
};

// Label-word priors: mask_only is the output for a lone mask token,
// empty_template the output for the template with empty input slots.
struct PriorProfile {
  Vector mask_only;
  Vector empty_template;

  bool operator==(const PriorProfile&) const = default;
};

enum class Method { None, CC, PmiDc, Cbm, Penalty };

// Parameter state of a calibrator. Only the fields used by `method` are
// populated.
//
// Penalty is stored in subtractive form: score = probs - penalty, with the
// penalty initialised to the positive mask-only prior. This is the same
// value as adding a vector initialised to the negative prior.
struct CalibratorSpec {
  Method method = Method::None;
  Vector cc_w;       // CC: diagonal of W, entries > 0
  Vector cc_b;       // CC: bias
  Vector penalty;    // PENALTY
  Vector cbm_means;  // CBM: column means of the evaluated set
  Vector pmi_prior;  // PMI_DC: template prior p(y|t)

  bool operator==(const CalibratorSpec&) const = default;
};

enum class MetricKind { Accuracy, MacroF1 };

struct TaskManifest {
  std::string task;
  std::vector<std::string> labels;
  std::vector<std::string> label_words;
  std::string template_id;
  MetricKind metric = MetricKind::Accuracy;
  bool balanced = true;
  std::string language;

  std::size_t num_labels() const noexcept { return labels.size(); }
  bool operator==(const TaskManifest&) const = default;
};

// Numeric floor applied to divisors and log operands. In strict mode a value
// at or below zero raises DomainError instead of being clamped.
struct NumericPolicy {
  bool strict = false;
  double epsilon = 1e-12;
};

std::string_view to_string(Method m);
std::string_view to_string(Split s);
std::string_view to_string(MetricKind m);

// Accepts the canonical names plus common spellings ("pmi", "pmi_dc",
// "penalty", ...), case-insensitive.
std::optional<Method> parse_method(std::string_view s);
std::optional<Split> parse_split(std::string_view s);
std::optional<MetricKind> parse_metric(std::string_view s);

}  // namespace calprompt
