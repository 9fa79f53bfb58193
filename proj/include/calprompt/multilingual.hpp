// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace calprompt {

enum class Accessibility { LowResource, UnseenLanguage, UnseenScript };

std::string_view to_string(Accessibility a);
// Accepts the table spellings ("Low-resource", "Unseen languages",
// "Unseen script") and the canonical ones ("low-resource", "unseen-language",
// "unseen-script").
std::optional<Accessibility> parse_accessibility(std::string_view s);

struct LanguageInfo {
  std::string code;
  std::string name;
  Accessibility accessibility = Accessibility::LowResource;
  std::string family;

  bool operator==(const LanguageInfo&) const = default;
};

using LanguageTable = std::vector<LanguageInfo>;

// Tab-separated, header row "code name accessibility family". Lines starting
// with '#' and blank lines are skipped.
LanguageTable load_language_table(const std::filesystem::path& path);
LanguageTable parse_language_table(std::istream& in);

const LanguageInfo* find_language(const LanguageTable& table, std::string_view code);

using LanguageMetrics = std::map<std::string, double>;

struct LanguageDelta {
  std::string code;
  std::string source;  // calibration method or input label
  double baseline = 0.0;
  double calibrated = 0.0;
  double delta = 0.0;
};

struct GroupSummary {
  std::string group;
  std::vector<double> deltas;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct DeltaReport {
  std::vector<LanguageDelta> per_language;
  std::vector<GroupSummary> groups;  // sorted by group name
  std::vector<std::string> warnings;
};

// delta = calibrated - baseline per language. Key sets must match exactly.
DeltaReport compute_deltas(const LanguageMetrics& baseline, const LanguageMetrics& calibrated,
                           std::string source = {});

// Concatenates the per-language entries of several reports, so one box can
// pool the deltas of more than one calibration method.
DeltaReport pool(std::span<const DeltaReport> reports);

enum class UnknownLanguage { Skip, Error };

DeltaReport group_by_accessibility(const DeltaReport& deltas, const LanguageTable& table,
                                   UnknownLanguage policy = UnknownLanguage::Skip);

// Keeps families with at least min_size distinct member languages among the
// deltas.
DeltaReport group_by_family(const DeltaReport& deltas, const LanguageTable& table,
                            std::size_t min_size = 3,
                            UnknownLanguage policy = UnknownLanguage::Skip);

GroupSummary summarize(std::string group, std::vector<double> deltas);

}  // namespace calprompt
