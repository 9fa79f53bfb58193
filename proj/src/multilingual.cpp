// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/multilingual.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "calprompt/errors.hpp"
#include "calprompt/stats.hpp"

namespace calprompt {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, '\t')) out.push_back(trim(field));
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string_view to_string(Accessibility a) {
  switch (a) {
    case Accessibility::LowResource: return "low-resource";
    case Accessibility::UnseenLanguage: return "unseen-language";
    case Accessibility::UnseenScript: return "unseen-script";
  }
  return "?";
}

std::optional<Accessibility> parse_accessibility(std::string_view s) {
  const std::string v = lower(trim(s));
  if (v == "low-resource" || v == "low resource") return Accessibility::LowResource;
  if (v == "unseen languages" || v == "unseen language" || v == "unseen-language") {
    return Accessibility::UnseenLanguage;
  }
  if (v == "unseen script" || v == "unseen scripts" || v == "unseen-script") {
    return Accessibility::UnseenScript;
  }
  return std::nullopt;
}

LanguageTable parse_language_table(std::istream& in) {
  LanguageTable table;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_tabs(line);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && lower(fields[0]) == "code") continue;
    }
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields, got " + std::to_string(fields.size()),
                       lineno);
    }
    LanguageInfo info;
    info.code = fields[0];
    info.name = fields[1];
    auto acc = parse_accessibility(fields[2]);
    if (!acc) throw ParseError("unknown accessibility value '" + fields[2] + "'", lineno);
    info.accessibility = *acc;
    info.family = fields[3];
    if (info.code.empty() || info.family.empty()) {
      throw ParseError("empty code or family", lineno);
    }
    if (!seen.insert(info.code).second) {
      throw ParseError("duplicate language code '" + info.code + "'", lineno);
    }
    table.push_back(std::move(info));
  }
  return table;
}

LanguageTable load_language_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open language table " + path.string());
  return parse_language_table(in);
}

const LanguageInfo* find_language(const LanguageTable& table, std::string_view code) {
  for (const auto& l : table) {
    if (l.code == code) return &l;
  }
  return nullptr;
}

DeltaReport compute_deltas(const LanguageMetrics& baseline, const LanguageMetrics& calibrated,
                           std::string source) {
  std::vector<std::string> only_base, only_cal;
  for (const auto& [k, v] : baseline) {
    if (!calibrated.count(k)) only_base.push_back(k);
  }
  for (const auto& [k, v] : calibrated) {
    if (!baseline.count(k)) only_cal.push_back(k);
  }
  if (!only_base.empty() || !only_cal.empty()) {
    std::string msg = "language sets differ;";
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
      return s;
    };
    if (!only_base.empty()) msg += " only in baseline: " + join(only_base) + ";";
    if (!only_cal.empty()) msg += " only in calibrated: " + join(only_cal) + ";";
    throw ValidationError(msg);
  }
  DeltaReport report;
  for (const auto& [code, base] : baseline) {
    const double cal = calibrated.at(code);
    report.per_language.push_back({code, source, base, cal, cal - base});
  }
  return report;
}

DeltaReport pool(std::span<const DeltaReport> reports) {
  DeltaReport out;
  for (const auto& r : reports) {
    out.per_language.insert(out.per_language.end(), r.per_language.begin(), r.per_language.end());
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  return out;
}

GroupSummary summarize(std::string group, std::vector<double> deltas) {
  if (deltas.empty()) throw PreconditionError("summarize: empty group '" + group + "'");
  GroupSummary s;
  s.group = std::move(group);
  // sorted so the stats do not depend on input order
  std::sort(deltas.begin(), deltas.end());
  s.min = deltas.front();
  s.max = deltas.back();
  s.q1 = quantile_sorted(deltas, 0.25);
  s.median = quantile_sorted(deltas, 0.5);
  s.q3 = quantile_sorted(deltas, 0.75);
  s.mean = mean(deltas);
  s.deltas = std::move(deltas);
  return s;
}

namespace {

template <typename KeyFn>
DeltaReport group_with(const DeltaReport& deltas, const LanguageTable& table,
                       UnknownLanguage policy, KeyFn key) {
  DeltaReport out;
  out.per_language = deltas.per_language;
  out.warnings = deltas.warnings;
  std::map<std::string, std::vector<double>> buckets;
  std::set<std::string> skipped;
  for (const auto& d : deltas.per_language) {
    const LanguageInfo* info = find_language(table, d.code);
    if (!info) {
      if (policy == UnknownLanguage::Error) {
        throw ValidationError("language '" + d.code + "' is not in the language table");
      }
      if (skipped.insert(d.code).second) {
        out.warnings.push_back("language '" + d.code + "' not in language table; skipped");
      }
      continue;
    }
    buckets[key(*info)].push_back(d.delta);
  }
  for (auto& [name, values] : buckets) out.groups.push_back(summarize(name, std::move(values)));
  return out;
}

}  // namespace

DeltaReport group_by_accessibility(const DeltaReport& deltas, const LanguageTable& table,
                                   UnknownLanguage policy) {
  return group_with(deltas, table, policy,
                    [](const LanguageInfo& l) { return std::string(to_string(l.accessibility)); });
}

DeltaReport group_by_family(const DeltaReport& deltas, const LanguageTable& table,
                            std::size_t min_size, UnknownLanguage policy) {
  DeltaReport all =
      group_with(deltas, table, policy, [](const LanguageInfo& l) { return l.family; });

  // family size counts languages, not pooled entries
  std::map<std::string, std::set<std::string>> members;
  for (const auto& d : deltas.per_language) {
    if (const auto* info = find_language(table, d.code)) members[info->family].insert(d.code);
  }
  std::vector<GroupSummary> kept;
  for (auto& g : all.groups) {
    if (members[g.group].size() >= min_size) kept.push_back(std::move(g));
  }
  all.groups = std::move(kept);
  return all;
}

}  // namespace calprompt
