// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/types.hpp"

#include <algorithm>
#include <cctype>

namespace calprompt {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::None: return "NONE";
    case Method::CC: return "CC";
    case Method::PmiDc: return "PMI_DC";
    case Method::Cbm: return "CBM";
    case Method::Penalty: return "PENALTY";
  }
  return "?";
}

std::string_view to_string(Split s) {
  return s == Split::Train ? "train" : "test";
}

std::string_view to_string(MetricKind m) {
  return m == MetricKind::Accuracy ? "accuracy" : "macro_f1";
}

std::optional<Method> parse_method(std::string_view s) {
  const std::string v = lower(s);
  if (v == "none" || v == "no_calib" || v == "raw") return Method::None;
  if (v == "cc") return Method::CC;
  if (v == "pmi_dc" || v == "pmi" || v == "pmidc") return Method::PmiDc;
  if (v == "cbm") return Method::Cbm;
  if (v == "penalty") return Method::Penalty;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  const std::string v = lower(s);
  if (v == "train") return Split::Train;
  if (v == "test") return Split::Test;
  return std::nullopt;
}

std::optional<MetricKind> parse_metric(std::string_view s) {
  const std::string v = lower(s);
  if (v == "accuracy" || v == "acc") return MetricKind::Accuracy;
  if (v == "macro_f1" || v == "f1") return MetricKind::MacroF1;
  return std::nullopt;
}

}  // namespace calprompt
