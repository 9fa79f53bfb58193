// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

/**
 * @file io.hpp
 * @brief File formats and bundle ingestion.
 *
 * Records   JSON Lines, one object per line, UTF-8, LF:
 *             {"example_id": str, "gold": int, "probs": [num...],
 *              "split": "train"|"test", "language": str (optional)}
 *           Blank lines and lines starting with '#' are ignored.
 * Manifest  one JSON or TOML document with keys task, labels, label_words,
 *           template_id, metric ("accuracy"|"macro_f1"), balanced, language.
 * Priors    JSON {"mask_only": [...], "empty_template": [...]}.
 * Config    JSON or TOML, see RunConfig.
 * Calibrator JSON {"header": {...}, "method": str, "cc_w": [...], ...};
 *           penalty is stored subtractively (score = probs - penalty).
 *
 * Every output file names the engine version, method and config hash: CSV
 * and text outputs on a leading "# " line, JSON outputs in a "header" object.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "calprompt/calibration.hpp"
#include "calprompt/evaluate.hpp"
#include "calprompt/fewshot.hpp"
#include "calprompt/multilingual.hpp"
#include "calprompt/types.hpp"

namespace calprompt {

using Json = nlohmann::ordered_json;

// Effective run settings. Loaded from a config file, then overridden by CLI
// flags.
struct RunConfig {
  Method method = Method::None;
  TrainConfig train;
  std::vector<std::size_t> shot_counts{kDefaultShotCounts.begin(), kDefaultShotCounts.end()};
  std::vector<std::uint64_t> seeds{kDefaultSeeds.begin(), kDefaultSeeds.end()};
  bool strict = false;
  bool renormalize = false;
  bool allow_metric_override = false;
  F1Variant f1 = F1Variant::Macro;
  std::optional<PriorSource> prior_source;

  NumericPolicy numeric() const { return NumericPolicy{strict, 1e-12}; }
  bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);
std::uint64_t config_hash(const RunConfig& cfg);
std::string hex64(std::uint64_t v);
std::uint64_t fnv1a64(std::string_view bytes);

struct RunBundle {
  TaskManifest manifest;
  PriorProfile priors;
  std::vector<LabelProbRecord> train;
  std::vector<LabelProbRecord> test;
  RunConfig config;

  std::vector<LabelProbRecord> all_records() const;
  bool operator==(const RunBundle&) const = default;
};

struct IngestOptions {
  bool renormalize = false;
  bool allow_metric_override = false;
  // Collect every problem instead of throwing at the first one.
  bool collect = false;
};

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t records_accepted = 0;
  std::size_t records_rejected = 0;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

LabelProbRecord parse_record(std::string_view line, std::size_t lineno = 0);
std::vector<LabelProbRecord> read_records(const std::filesystem::path& path,
                                          IngestReport* report = nullptr);

// Reads JSON, or TOML when the path ends in ".toml" or the text does not start
// with '{'.
Json read_document(const std::filesystem::path& path);
Json parse_toml(std::string_view text);

TaskManifest manifest_from_json(const Json& j);
Json to_json(const TaskManifest& m);
TaskManifest read_manifest(const std::filesystem::path& path);

PriorProfile priors_from_json(const Json& j);
Json to_json(const PriorProfile& p);
PriorProfile read_priors(const std::filesystem::path& path);

RunConfig read_run_config(const std::filesystem::path& path);

void validate_manifest(const TaskManifest& m, bool allow_metric_override);

// Loads and checks all inputs. Throws ValidationError/ParseError on the first
// problem unless options.collect is set, in which case problems land in
// `report` and the returned bundle holds only the accepted records.
RunBundle ingest(const std::filesystem::path& records_path,
                 const std::filesystem::path& manifest_path,
                 const std::filesystem::path& priors_path, const IngestOptions& options = {},
                 IngestReport* report = nullptr);

// Applies --renormalize to records and priors.
void renormalize_bundle(RunBundle& bundle, const NumericPolicy& policy);

std::string record_to_line(const LabelProbRecord& r);
void write_records(const std::filesystem::path& path, const std::vector<LabelProbRecord>& records);
// Writes records.jsonl, manifest.json, priors.json and config.json into dir.
void write_bundle(const std::filesystem::path& dir, const RunBundle& bundle);
RunBundle read_bundle(const std::filesystem::path& dir);

Json header_json(Method method, const RunConfig& cfg);
std::string header_line(Method method, const RunConfig& cfg);
std::string header_line(std::string_view method_label, const RunConfig& cfg);
Json header_json(std::string_view method_label, const RunConfig& cfg);

Json to_json(const CalibratorSpec& spec);
CalibratorSpec calibrator_from_json(const Json& j);
CalibratorSpec read_calibrator(const std::filesystem::path& path);

std::string grid_to_csv(const GridReport& report);
Json to_json(const GridReport& report);

std::string curve_to_csv(const ThresholdCurve& curve);

std::string delta_rows_csv(const DeltaReport& report);
std::string group_rows_csv(const DeltaReport& report);

// Per-language metrics from an evaluate report (JSON, "per_language") or from
// a CSV with a "language" column. `column` picks the CSV value column; empty
// means the first non-language column.
LanguageMetrics read_language_metrics(const std::filesystem::path& path,
                                      std::string_view column = {});

// Shortest decimal that round-trips to the same double; integral values keep
// a trailing ".0".
std::string format_double(double v);

// Write to a sibling temp file, then rename over the target.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace calprompt
