// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "calprompt/errors.hpp"

namespace calprompt {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// primitives

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void atomic_write(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vector vector_from(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError(what + " must contain only numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::vector<std::string> strings_from(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of strings");
  std::vector<std::string> v;
  for (const auto& x : j) {
    if (!x.is_string()) throw ParseError(what + " must contain only strings");
    v.push_back(x.get<std::string>());
  }
  return v;
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

void check_prob_vector(const Vector& v, std::size_t num_labels, const std::string& what) {
  if (v.size() != num_labels) {
    throw ValidationError(what + " has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(num_labels));
  }
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ValidationError(what + " has entry " + format_double(x) + " outside [0,1]");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// run config

namespace {

std::string_view to_string(PriorSource s) {
  return s == PriorSource::MaskOnly ? "mask_only" : "empty_template";
}

}  // namespace

Json to_json(const RunConfig& cfg) {
  Json j;
  j["method"] = std::string(to_string(cfg.method));
  j["epochs"] = cfg.train.epochs;
  j["lr"] = cfg.train.learning_rate;
  j["shots"] = cfg.shot_counts;
  j["seeds"] = cfg.seeds;
  j["shots_total"] = cfg.train.shots_total;
  j["any_shots"] = cfg.train.any_shot_count;
  j["strict"] = cfg.strict;
  j["renormalize"] = cfg.renormalize;
  j["metric_override"] = cfg.allow_metric_override;
  j["f1"] = std::string(to_string(cfg.f1));
  j["prior_source"] = cfg.prior_source ? Json(std::string(to_string(*cfg.prior_source))) : Json();
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("config must be an object");
  RunConfig cfg;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "method") {
        auto m = parse_method(v.get<std::string>());
        if (!m) throw ParseError("config: unknown method '" + v.get<std::string>() + "'");
        cfg.method = *m;
      } else if (key == "epochs") {
        cfg.train.epochs = v.get<std::size_t>();
      } else if (key == "lr" || key == "learning_rate") {
        cfg.train.learning_rate = v.get<double>();
      } else if (key == "shots") {
        cfg.shot_counts = v.get<std::vector<std::size_t>>();
      } else if (key == "seeds") {
        cfg.seeds = v.get<std::vector<std::uint64_t>>();
      } else if (key == "shots_total") {
        cfg.train.shots_total = v.get<bool>();
      } else if (key == "any_shots") {
        cfg.train.any_shot_count = v.get<bool>();
      } else if (key == "strict") {
        cfg.strict = v.get<bool>();
      } else if (key == "renormalize") {
        cfg.renormalize = v.get<bool>();
      } else if (key == "metric_override") {
        cfg.allow_metric_override = v.get<bool>();
      } else if (key == "f1") {
        cfg.f1 = parse_f1_variant(v.get<std::string>());
      } else if (key == "prior_source") {
        if (v.is_null()) {
          cfg.prior_source.reset();
        } else if (v.get<std::string>() == "mask_only") {
          cfg.prior_source = PriorSource::MaskOnly;
        } else if (v.get<std::string>() == "empty_template") {
          cfg.prior_source = PriorSource::EmptyTemplate;
        } else {
          throw ParseError("config: prior_source must be mask_only or empty_template");
        }
      } else {
        throw ParseError("config: unknown key '" + key + "'");
      }
    } catch (const Json::exception& e) {
      throw ParseError("config: bad value for '" + key + "': " + e.what());
    }
  }
  return cfg;
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(to_json(cfg).dump()); }

RunConfig read_run_config(const fs::path& path) { return run_config_from_json(read_document(path)); }

// ---------------------------------------------------------------------------
// documents

Json read_document(const fs::path& path) {
  const std::string text = read_text(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  const bool looks_json = first != std::string::npos && text[first] == '{';
  if (path.extension() == ".toml" || !looks_json) return parse_toml(text);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

TaskManifest manifest_from_json(const Json& j) {
  const std::string where = "manifest";
  if (!j.is_object()) throw ParseError("manifest must be an object");
  TaskManifest m;
  try {
    m.task = require(j, "task", where).get<std::string>();
    m.labels = strings_from(require(j, "labels", where), "labels");
    m.label_words = strings_from(require(j, "label_words", where), "label_words");
    m.template_id = j.value("template_id", std::string{});
    const std::string metric = require(j, "metric", where).get<std::string>();
    auto mk = parse_metric(metric);
    if (!mk) throw ParseError("manifest: unknown metric '" + metric + "'");
    m.metric = *mk;
    m.balanced = require(j, "balanced", where).get<bool>();
    m.language = j.value("language", std::string{});
  } catch (const Json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return m;
}

Json to_json(const TaskManifest& m) {
  Json j;
  j["task"] = m.task;
  j["labels"] = m.labels;
  j["label_words"] = m.label_words;
  j["template_id"] = m.template_id;
  j["metric"] = std::string(to_string(m.metric));
  j["balanced"] = m.balanced;
  j["language"] = m.language;
  return j;
}

TaskManifest read_manifest(const fs::path& path) { return manifest_from_json(read_document(path)); }

void validate_manifest(const TaskManifest& m, bool allow_metric_override) {
  if (m.labels.size() < 2) throw ValidationError("manifest: need at least 2 labels");
  if (m.labels.size() != m.label_words.size()) {
    throw ValidationError("manifest: " + std::to_string(m.labels.size()) + " labels but " +
                          std::to_string(m.label_words.size()) + " label words");
  }
  std::set<std::string> words(m.label_words.begin(), m.label_words.end());
  if (words.size() != m.label_words.size()) throw ValidationError("manifest: duplicate label word");
  const bool expect_accuracy = m.balanced;
  if (!allow_metric_override && (m.metric == MetricKind::Accuracy) != expect_accuracy) {
    throw ValidationError(
        "manifest: balanced tasks report accuracy and imbalanced tasks macro_f1 (got balanced=" +
        std::string(m.balanced ? "true" : "false") + ", metric=" +
        std::string(to_string(m.metric)) + "); pass --metric-override to allow");
  }
}

PriorProfile priors_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("priors must be an object");
  PriorProfile p;
  p.mask_only = vector_from(require(j, "mask_only", "priors"), "mask_only");
  p.empty_template = vector_from(require(j, "empty_template", "priors"), "empty_template");
  return p;
}

Json to_json(const PriorProfile& p) {
  Json j;
  j["mask_only"] = p.mask_only;
  j["empty_template"] = p.empty_template;
  return j;
}

PriorProfile read_priors(const fs::path& path) { return priors_from_json(read_document(path)); }

// ---------------------------------------------------------------------------
// records

LabelProbRecord parse_record(std::string_view line, std::size_t lineno) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object", lineno);
  LabelProbRecord r;
  try {
    auto id = j.find("example_id");
    if (id == j.end() || !id->is_string()) throw ParseError("missing string example_id", lineno);
    r.example_id = id->get<std::string>();
    auto gold = j.find("gold");
    if (gold == j.end() || !gold->is_number_integer() || gold->get<std::int64_t>() < 0) {
      throw ParseError("record '" + r.example_id + "': gold must be a non-negative integer", lineno);
    }
    r.gold = gold->get<std::size_t>();
    auto probs = j.find("probs");
    if (probs == j.end()) throw ParseError("record '" + r.example_id + "': missing probs", lineno);
    r.probs = vector_from(*probs, "probs");
    auto split = j.find("split");
    if (split == j.end() || !split->is_string()) {
      throw ParseError("record '" + r.example_id + "': missing split", lineno);
    }
    auto s = parse_split(split->get<std::string>());
    if (!s) throw ParseError("record '" + r.example_id + "': split must be train or test", lineno);
    r.split = *s;
    if (auto lang = j.find("language"); lang != j.end() && !lang->is_null()) {
      r.language = lang->get<std::string>();
    }
  } catch (const ParseError& e) {
    if (e.line() == 0 && lineno) throw ParseError(e.what(), lineno);
    throw;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("record: ") + e.what(), lineno);
  }
  return r;
}

std::vector<LabelProbRecord> read_records(const fs::path& path, IngestReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open records file " + path.string());
  std::vector<LabelProbRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (report) ++report->lines_read;
    if (report) {
      try {
        out.push_back(parse_record(line, lineno));
      } catch (const ParseError& e) {
        ++report->records_rejected;
        report->errors.push_back(path.filename().string() + ": " + e.what());
      }
    } else {
      out.push_back(parse_record(line, lineno));
    }
  }
  return out;
}

std::string record_to_line(const LabelProbRecord& r) {
  Json j;
  j["example_id"] = r.example_id;
  j["gold"] = r.gold;
  j["probs"] = r.probs;
  j["split"] = std::string(to_string(r.split));
  if (!r.language.empty()) j["language"] = r.language;
  return j.dump();
}

void write_records(const fs::path& path, const std::vector<LabelProbRecord>& records) {
  std::string text;
  for (const auto& r : records) text += record_to_line(r) + "\n";
  atomic_write(path, text);
}

// ---------------------------------------------------------------------------
// bundle

std::vector<LabelProbRecord> RunBundle::all_records() const {
  std::vector<LabelProbRecord> all = train;
  all.insert(all.end(), test.begin(), test.end());
  return all;
}

namespace {

// Record-level invariants against the manifest; returns the problem or "".
std::string check_record(const LabelProbRecord& r, std::size_t num_labels) {
  if (r.probs.size() != num_labels) {
    return "record '" + r.example_id + "' has " + std::to_string(r.probs.size()) +
           " probabilities, manifest declares " + std::to_string(num_labels) + " labels";
  }
  double sum = 0.0;
  for (double p : r.probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return "record '" + r.example_id + "' has probability " + format_double(p) +
             " outside [0,1]";
    }
    sum += p;
  }
  if (sum > 1.0 + 1e-6) {
    return "record '" + r.example_id + "' probabilities sum to " + format_double(sum) + " > 1";
  }
  if (r.gold >= num_labels) {
    return "record '" + r.example_id + "' has gold " + std::to_string(r.gold) + " outside [0, " +
           std::to_string(num_labels) + ")";
  }
  return {};
}

}  // namespace

RunBundle ingest(const fs::path& records_path, const fs::path& manifest_path,
                 const fs::path& priors_path, const IngestOptions& options,
                 IngestReport* report) {
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  auto fail = [&](const std::string& msg) {
    if (!options.collect) throw ValidationError(msg);
    rep.errors.push_back(msg);
  };

  RunBundle bundle;
  bundle.manifest = read_manifest(manifest_path);
  try {
    validate_manifest(bundle.manifest, options.allow_metric_override);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
  const std::size_t num_labels = bundle.manifest.num_labels();

  bundle.priors = read_priors(priors_path);
  for (const auto& [vec, name] : {std::pair{&bundle.priors.mask_only, "priors mask_only"},
                                  std::pair{&bundle.priors.empty_template, "priors empty_template"}}) {
    try {
      check_prob_vector(*vec, num_labels, name);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

  // Re-read line by line so diagnostics carry line numbers.
  std::ifstream in(records_path, std::ios::binary);
  if (!in) throw ParseError("cannot open records file " + records_path.string());
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  const std::string file = records_path.filename().string();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    ++rep.lines_read;
    LabelProbRecord r;
    try {
      r = parse_record(line, lineno);
    } catch (const ParseError& e) {
      ++rep.records_rejected;
      if (!options.collect) throw ParseError(file + ": " + e.what());
      rep.errors.push_back(file + ": " + e.what());
      continue;
    }
    std::string problem = check_record(r, num_labels);
    if (problem.empty() && !ids.insert(r.example_id).second) {
      problem = "duplicate example_id '" + r.example_id + "'";
    }
    if (!problem.empty()) {
      ++rep.records_rejected;
      fail(file + ": line " + std::to_string(lineno) + ": " + problem);
      continue;
    }
    ++rep.records_accepted;
    (r.split == Split::Train ? bundle.train : bundle.test).push_back(std::move(r));
  }

  bundle.config.renormalize = options.renormalize;
  bundle.config.allow_metric_override = options.allow_metric_override;
  if (options.renormalize) renormalize_bundle(bundle, bundle.config.numeric());
  return bundle;
}

void renormalize_bundle(RunBundle& bundle, const NumericPolicy& policy) {
  for (auto* split : {&bundle.train, &bundle.test}) {
    for (auto& r : *split) r.probs = renormalize(r.probs, policy);
  }
  bundle.priors.mask_only = renormalize(bundle.priors.mask_only, policy);
  bundle.priors.empty_template = renormalize(bundle.priors.empty_template, policy);
}

void write_bundle(const fs::path& dir, const RunBundle& bundle) {
  fs::create_directories(dir);
  write_records(dir / "records.jsonl", bundle.all_records());
  atomic_write(dir / "manifest.json", to_json(bundle.manifest).dump(2) + "\n");
  atomic_write(dir / "priors.json", to_json(bundle.priors).dump(2) + "\n");
  atomic_write(dir / "config.json", to_json(bundle.config).dump(2) + "\n");
}

RunBundle read_bundle(const fs::path& dir) {
  RunConfig cfg;
  if (fs::exists(dir / "config.json")) cfg = read_run_config(dir / "config.json");
  IngestOptions opts;
  opts.allow_metric_override = cfg.allow_metric_override;
  // stored records are already in their final form
  RunBundle b = ingest(dir / "records.jsonl", dir / "manifest.json", dir / "priors.json", opts);
  b.config = cfg;
  return b;
}

// ---------------------------------------------------------------------------
// outputs

Json header_json(std::string_view method_label, const RunConfig& cfg) {
  Json h;
  h["engine"] = kEngineName;
  h["version"] = kEngineVersion;
  h["method"] = std::string(method_label);
  h["config_hash"] = hex64(config_hash(cfg));
  return h;
}

Json header_json(Method method, const RunConfig& cfg) { return header_json(to_string(method), cfg); }

std::string header_line(std::string_view method_label, const RunConfig& cfg) {
  return std::string("# ") + kEngineName + " " + kEngineVersion + " method=" +
         std::string(method_label) + " config=" + hex64(config_hash(cfg)) + "\n";
}

std::string header_line(Method method, const RunConfig& cfg) {
  return header_line(to_string(method), cfg);
}

Json to_json(const CalibratorSpec& spec) {
  Json j;
  j["method"] = std::string(to_string(spec.method));
  switch (spec.method) {
    case Method::None:
      break;
    case Method::CC:
      j["cc_w"] = spec.cc_w;
      j["cc_b"] = spec.cc_b;
      break;
    case Method::PmiDc:
      j["pmi_prior"] = spec.pmi_prior;
      break;
    case Method::Cbm:
      j["cbm_means"] = spec.cbm_means;
      break;
    case Method::Penalty:
      j["penalty"] = spec.penalty;
      j["penalty_convention"] = "score = probs - penalty";
      break;
  }
  return j;
}

CalibratorSpec calibrator_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("calibrator must be an object");
  CalibratorSpec spec;
  const std::string name = require(j, "method", "calibrator").get<std::string>();
  auto m = parse_method(name);
  if (!m) throw ParseError("calibrator: unknown method '" + name + "'");
  spec.method = *m;
  auto opt = [&](const char* key, Vector& dst) {
    if (auto it = j.find(key); it != j.end()) dst = vector_from(*it, key);
  };
  opt("cc_w", spec.cc_w);
  opt("cc_b", spec.cc_b);
  opt("penalty", spec.penalty);
  opt("cbm_means", spec.cbm_means);
  opt("pmi_prior", spec.pmi_prior);
  return spec;
}

CalibratorSpec read_calibrator(const fs::path& path) {
  return calibrator_from_json(read_document(path));
}

std::string grid_to_csv(const GridReport& report) {
  std::string out = "method,shots,n,mean,std,cell\n";
  char cell[64];
  for (const auto& c : report.cells) {
    if (c.shots == 0) {
      std::snprintf(cell, sizeof cell, "%.1f", 100.0 * c.mean);
    } else {
      std::snprintf(cell, sizeof cell, "%.1f_{%.1f}", 100.0 * c.mean, 100.0 * c.std);
    }
    out += std::string(to_string(c.method)) + "," + std::to_string(c.shots) + "," +
           std::to_string(c.values.size()) + "," + format_double(c.mean) + "," +
           format_double(c.std) + "," + cell + "\n";
  }
  return out;
}

Json to_json(const GridReport& report) {
  Json j;
  j["task"] = report.task;
  j["metric"] = std::string(to_string(report.metric));
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json cj;
    cj["method"] = std::string(to_string(c.method));
    cj["shots"] = c.shots;
    cj["seeds"] = c.seeds;
    cj["values"] = c.values;
    cj["mean"] = c.mean;
    cj["std"] = c.std;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  j["warnings"] = report.warnings;
  return j;
}

std::string curve_to_csv(const ThresholdCurve& curve) {
  std::string out = "tau,accuracy\n";
  for (const auto& p : curve.grid) out += format_double(p.tau) + "," + format_double(p.accuracy) + "\n";
  return out;
}

std::string delta_rows_csv(const DeltaReport& report) {
  std::string out = "language,source,baseline,calibrated,delta\n";
  for (const auto& d : report.per_language) {
    out += d.code + "," + d.source + "," + format_double(d.baseline) + "," +
           format_double(d.calibrated) + "," + format_double(d.delta) + "\n";
  }
  return out;
}

std::string group_rows_csv(const DeltaReport& report) {
  std::string out = "group,n,min,q1,median,q3,max,mean\n";
  for (const auto& g : report.groups) {
    out += g.group + "," + std::to_string(g.deltas.size()) + "," + format_double(g.min) + "," +
           format_double(g.q1) + "," + format_double(g.median) + "," + format_double(g.q3) + "," +
           format_double(g.max) + "," + format_double(g.mean) + "\n";
  }
  return out;
}

LanguageMetrics read_language_metrics(const fs::path& path, std::string_view column) {
  const std::string text = read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  LanguageMetrics out;
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
    auto it = j.find("per_language");
    if (it == j.end() || !it->is_object()) {
      throw ParseError(path.string() + ": report has no per_language object");
    }
    for (const auto& [lang, v] : it->items()) {
      const Json& val = v.is_object() ? v.at("metric") : v;
      out[lang] = val.get<double>();
    }
    return out;
  }

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::size_t lang_col = 0, value_col = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string x;
    std::istringstream is(s);
    while (std::getline(is, x, ',')) f.push_back(x);
    return f;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (header.empty()) {
      header = fields;
      bool found_lang = false, found_value = false;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "language") {
          lang_col = i;
          found_lang = true;
        }
      }
      if (!found_lang) throw ParseError(path.string() + ": CSV lacks a 'language' column", lineno);
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == lang_col) continue;
        if (column.empty() || header[i] == column) {
          value_col = i;
          found_value = true;
          break;
        }
      }
      if (!found_value) {
        throw ParseError(path.string() + ": no column '" + std::string(column) + "'", lineno);
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(path.string() + ": expected " + std::to_string(header.size()) + " fields",
                       lineno);
    }
    double v = 0.0;
    const std::string& cell = fields[value_col];
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw ParseError(path.string() + ": bad number '" + cell + "'", lineno);
    }
    if (!out.emplace(fields[lang_col], v).second) {
      throw ParseError(path.string() + ": duplicate language '" + fields[lang_col] + "'", lineno);
    }
  }
  return out;
}

}  // namespace calprompt
