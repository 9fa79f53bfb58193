// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

// calprompt: offline calibration, few-shot training and evaluation of cloze
// prompt label-word probabilities.
//
// Exit codes: 0 success, 1 invalid input or validation failure, 2 internal
// error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "calprompt/calibration.hpp"
#include "calprompt/errors.hpp"
#include "calprompt/evaluate.hpp"
#include "calprompt/fewshot.hpp"
#include "calprompt/io.hpp"
#include "calprompt/log.hpp"
#include "calprompt/metrics.hpp"
#include "calprompt/multilingual.hpp"

namespace fs = std::filesystem;
using namespace calprompt;

namespace {

struct GlobalFlags {
  std::string config_path;
  bool strict = false;
  bool renormalize = false;
  bool metric_override = false;
  bool shots_total = false;
  bool any_shots = false;
  std::string f1;
  std::string method;
  std::string prior_source;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> shots;
  std::size_t epochs = 0;
  double lr = 0.0;
};

struct InputPaths {
  std::string records;
  std::string manifest;
  std::string priors;
};

void add_inputs(CLI::App* cmd, InputPaths& in) {
  cmd->add_option("--records", in.records, "Label-probability records (JSON Lines)")->required();
  cmd->add_option("--manifest", in.manifest, "Task manifest (JSON or TOML)")->required();
  cmd->add_option("--priors", in.priors, "Prior profile (JSON)")->required();
}

Method require_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw PreconditionError("unknown method '" + name + "'");
  return *m;
}

// Config file first, then explicit flags on top.
RunConfig resolve_config(const CLI::App& app, const GlobalFlags& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = read_run_config(g.config_path);
  if (g.strict) cfg.strict = true;
  if (g.renormalize) cfg.renormalize = true;
  if (g.metric_override) cfg.allow_metric_override = true;
  if (g.shots_total) cfg.train.shots_total = true;
  if (g.any_shots) cfg.train.any_shot_count = true;
  if (!g.f1.empty()) cfg.f1 = parse_f1_variant(g.f1);
  if (!g.method.empty()) cfg.method = require_method(g.method);
  if (!g.prior_source.empty()) {
    if (g.prior_source == "mask_only") {
      cfg.prior_source = PriorSource::MaskOnly;
    } else if (g.prior_source == "empty_template") {
      cfg.prior_source = PriorSource::EmptyTemplate;
    } else {
      throw PreconditionError("--prior-source must be mask_only or empty_template");
    }
  }
  if (app.count("--seeds")) cfg.seeds = g.seeds;
  if (app.count("--shots")) cfg.shot_counts = g.shots;
  if (app.count("--epochs")) cfg.train.epochs = g.epochs;
  if (app.count("--lr")) cfg.train.learning_rate = g.lr;
  return cfg;
}

RunBundle load_bundle(const InputPaths& in, const RunConfig& cfg) {
  IngestOptions opts;
  opts.allow_metric_override = cfg.allow_metric_override;
  RunBundle bundle = ingest(in.records, in.manifest, in.priors, opts);
  bundle.config = cfg;
  if (cfg.renormalize) renormalize_bundle(bundle, cfg.numeric());
  log::info("loaded " + std::to_string(bundle.train.size()) + " train and " +
            std::to_string(bundle.test.size()) + " test records for task '" +
            bundle.manifest.task + "'");
  return bundle;
}

std::vector<LabelProbRecord> select_split(const RunBundle& b, const std::string& split) {
  if (split == "test") return b.test;
  if (split == "train") return b.train;
  if (split == "all") return b.all_records();
  throw PreconditionError("--split must be test, train or all");
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    atomic_write(path, content);
    log::info("wrote " + path);
  }
}

int cmd_validate(const InputPaths& in, const RunConfig& cfg, const std::string& calibrator) {
  IngestOptions opts;
  opts.allow_metric_override = cfg.allow_metric_override;
  opts.collect = true;
  IngestReport report;
  RunBundle bundle;
  try {
    bundle = ingest(in.records, in.manifest, in.priors, opts, &report);
  } catch (const Error& e) {
    report.errors.push_back(e.what());
  }
  if (!calibrator.empty() && report.errors.empty()) {
    try {
      check_spec(read_calibrator(calibrator), bundle.manifest.num_labels());
    } catch (const Error& e) {
      report.errors.push_back(calibrator + ": " + e.what());
    }
  }
  for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
  std::cout << "records read: " << report.lines_read << ", accepted: " << report.records_accepted
            << ", rejected: " << report.records_rejected << "\n";
  std::cout << (report.errors.empty() ? "OK" : "INVALID") << "\n";
  return report.errors.empty() ? 0 : 1;
}

int cmd_calibrate(const InputPaths& in, const RunConfig& cfg, const std::string& split,
                  const std::string& out, const std::string& out_spec) {
  const RunBundle bundle = load_bundle(in, cfg);
  const auto records = select_split(bundle, split);
  if (records.empty()) throw PreconditionError("no records in split '" + split + "'");
  CalibratorSpec spec = make_zero_shot(cfg.method, bundle.priors, cfg.numeric(), cfg.prior_source);

  Matrix probs;
  for (const auto& r : records) probs.push_back(r.probs);
  Vector means;
  const Matrix scores = calibrate_all(probs, spec, cfg.numeric(), &means);
  if (cfg.method == Method::Cbm) spec.cbm_means = means;

  std::string csv = header_line(cfg.method, cfg);
  csv += "example_id,gold,pred";
  for (std::size_t j = 0; j < bundle.manifest.num_labels(); ++j) csv += ",score_" + std::to_string(j);
  csv += "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    csv += records[i].example_id + "," + std::to_string(records[i].gold) + "," +
           std::to_string(predict(scores[i]));
    for (double s : scores[i]) csv += "," + format_double(s);
    csv += "\n";
  }
  emit(out, csv);
  if (!out_spec.empty()) {
    Json j = to_json(spec);
    j["header"] = header_json(cfg.method, cfg);
    atomic_write(out_spec, j.dump(2) + "\n");
  }
  return 0;
}

struct TrainArgs {
  std::vector<std::string> methods{"PENALTY", "CC"};
  std::string report;
  std::string report_json;
  std::string text;
  std::string out_spec;
  std::size_t export_shots = 0;
  std::uint64_t export_seed = 0;
  bool export_seed_set = false;
};

int cmd_train(const InputPaths& in, RunConfig cfg, const TrainArgs& args) {
  GridOptions opts;
  opts.methods.clear();
  for (const auto& m : args.methods) opts.methods.push_back(require_method(m));
  cfg.method = opts.methods.front();
  const RunBundle bundle = load_bundle(in, cfg);
  opts.shot_counts = cfg.shot_counts;
  opts.seeds = cfg.seeds;
  opts.train = cfg.train;
  opts.eval = EvalOptions{cfg.numeric(), cfg.f1};
  opts.prior_source = cfg.prior_source;

  const auto records = bundle.all_records();
  const GridReport report = run_grid(bundle.manifest, records, bundle.priors, opts);
  for (const auto& w : report.warnings) log::warn(w);

  std::string label;
  for (Method m : opts.methods) label += (label.empty() ? "" : "+") + std::string(to_string(m));
  const std::string header = header_line(label, cfg);
  const std::string text = header + render_grid_text(report);
  std::cout << text;
  if (!args.text.empty()) atomic_write(args.text, text);
  if (!args.report.empty()) atomic_write(args.report, header + grid_to_csv(report));
  if (!args.report_json.empty()) {
    Json j = to_json(report);
    j["header"] = header_json(label, cfg);
    atomic_write(args.report_json, j.dump(2) + "\n");
  }
  if (!args.out_spec.empty()) {
    std::size_t k = args.export_shots;
    if (k == 0) {
      for (auto s : cfg.shot_counts) k = std::max(k, s);
    }
    const std::uint64_t seed = args.export_seed_set ? args.export_seed : cfg.seeds.front();
    const CalibratorSpec spec = train_calibrator(opts.methods.front(), bundle.train, bundle.manifest,
                                                 bundle.priors, k, seed, opts);
    Json j = to_json(spec);
    j["header"] = header_json(spec.method, cfg);
    j["shots"] = k;
    j["seed"] = seed;
    atomic_write(args.out_spec, j.dump(2) + "\n");
  }
  return 0;
}

Json confusion_json(const ConfusionMatrix& cm) {
  Json rows = Json::array();
  for (std::size_t g = 0; g < cm.num_labels(); ++g) {
    Json row = Json::array();
    for (std::size_t p = 0; p < cm.num_labels(); ++p) row.push_back(cm.at(g, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_evaluate(const InputPaths& in, RunConfig cfg, const std::string& calibrator,
                 const std::string& split, const std::string& out) {
  CalibratorSpec spec;
  if (!calibrator.empty()) {
    spec = read_calibrator(calibrator);
    cfg.method = spec.method;
  }
  const RunBundle bundle = load_bundle(in, cfg);
  if (calibrator.empty()) {
    spec = make_zero_shot(cfg.method, bundle.priors, cfg.numeric(), cfg.prior_source);
  }
  const auto records = select_split(bundle, split);
  const EvalOptions eval{cfg.numeric(), cfg.f1};
  const EvalResult overall = evaluate(records, spec, bundle.manifest, eval);
  const auto by_lang = evaluate_by_language(records, spec, bundle.manifest, eval);

  Json j;
  j["header"] = header_json(spec.method, cfg);
  j["task"] = bundle.manifest.task;
  j["method"] = std::string(to_string(spec.method));
  j["metric_name"] = bundle.manifest.metric == MetricKind::Accuracy
                         ? std::string("accuracy")
                         : "f1_" + std::string(to_string(cfg.f1));
  j["split"] = split;
  j["n"] = records.size();
  j["metric"] = overall.metric;
  j["confusion"] = confusion_json(overall.confusion);
  if (spec.method == Method::Cbm) j["cbm_means"] = overall.cbm_means;
  Json langs = Json::object();
  for (const auto& [code, r] : by_lang) {
    if (code.empty()) continue;
    Json lj;
    lj["metric"] = r.metric;
    lj["n"] = r.predictions.size();
    langs[code] = std::move(lj);
  }
  j["per_language"] = std::move(langs);
  emit(out, j.dump(2) + "\n");

  std::ostringstream os;
  os << std::left << std::setw(12) << "language" << std::setw(8) << "n"
     << j["metric_name"].get<std::string>() << "\n";
  for (const auto& [code, r] : by_lang) {
    os << std::setw(12) << (code.empty() ? "-" : code) << std::setw(8) << r.predictions.size()
       << std::fixed << std::setprecision(4) << r.metric << "\n";
  }
  os << std::setw(12) << "overall" << std::setw(8) << records.size() << std::fixed
     << std::setprecision(4) << overall.metric << "\n";
  if (!out.empty() && out != "-") std::cout << os.str();
  return 0;
}

struct SweepArgs {
  std::size_t positive_index = 1;
  double grid_step = 0.01;
  std::string score = "raw";
  std::string split = "test";
  std::string out;
};

int cmd_sweep(const InputPaths& in, const RunConfig& cfg, const SweepArgs& args) {
  const RunBundle bundle = load_bundle(in, cfg);
  if (bundle.manifest.num_labels() != 2) {
    throw PreconditionError("sweep needs a binary task, manifest has " +
                            std::to_string(bundle.manifest.num_labels()) + " labels");
  }
  PositiveScore mode;
  if (args.score == "raw") {
    mode = PositiveScore::Raw;
  } else if (args.score == "ratio") {
    mode = PositiveScore::PairRatio;
  } else {
    throw PreconditionError("--score must be raw or ratio");
  }
  const auto records = select_split(bundle, args.split);
  std::vector<double> pos;
  std::vector<std::size_t> golds;
  for (const auto& r : records) {
    pos.push_back(positive_probability(r.probs, args.positive_index, mode));
    // gold 1 means "positive class" for the sweep
    golds.push_back(r.gold == args.positive_index ? 1 : 0);
  }
  const ThresholdCurve curve = threshold_sweep(pos, golds, args.grid_step);
  emit(args.out, header_line(Method::None, cfg) + curve_to_csv(curve));
  std::cerr << "best_tau=" << format_double(curve.best_tau)
            << " best_accuracy=" << format_double(curve.best_accuracy) << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string baseline;
  std::vector<std::string> calibrated;
  std::string languages = "data/languages.tsv";
  std::size_t min_size = 3;
  std::string unknown = "skip";
  std::string out_dir = ".";
};

// "path#column" selects a CSV column; the label is the column name or the
// file stem.
std::pair<LanguageMetrics, std::string> load_metrics_arg(const std::string& arg) {
  const auto hash = arg.rfind('#');
  const std::string path = hash == std::string::npos ? arg : arg.substr(0, hash);
  const std::string column = hash == std::string::npos ? "" : arg.substr(hash + 1);
  const std::string label = column.empty() ? fs::path(path).stem().string() : column;
  return {read_language_metrics(path, column), label};
}

int cmd_analyze(const RunConfig& cfg, const AnalyzeArgs& args) {
  UnknownLanguage policy;
  if (args.unknown == "skip") {
    policy = UnknownLanguage::Skip;
  } else if (args.unknown == "error") {
    policy = UnknownLanguage::Error;
  } else {
    throw PreconditionError("--unknown must be skip or error");
  }
  const LanguageTable table = load_language_table(args.languages);
  const auto [baseline, base_label] = load_metrics_arg(args.baseline);
  std::vector<DeltaReport> parts;
  std::string label;
  for (const auto& c : args.calibrated) {
    auto [metrics, name] = load_metrics_arg(c);
    parts.push_back(compute_deltas(baseline, metrics, name));
    label += (label.empty() ? "" : "+") + name;
  }
  const DeltaReport pooled = pool(parts);
  const DeltaReport by_access = group_by_accessibility(pooled, table, policy);
  const DeltaReport by_family = group_by_family(pooled, table, args.min_size, policy);
  for (const auto& w : by_access.warnings) log::warn(w);

  fs::create_directories(args.out_dir);
  const std::string header = header_line(label, cfg);
  const fs::path dir(args.out_dir);
  atomic_write(dir / "deltas.csv", header + delta_rows_csv(pooled));
  atomic_write(dir / "accessibility.csv", header + group_rows_csv(by_access));
  atomic_write(dir / "family.csv", header + group_rows_csv(by_family));

  std::cout << "accessibility groups:\n" << group_rows_csv(by_access);
  std::cout << "family groups (min size " << args.min_size << "):\n" << group_rows_csv(by_family);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calprompt: calibration engine for cloze-prompt label-word probabilities"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kEngineVersion));

  GlobalFlags g;
  app.add_option("--config", g.config_path, "Run config (JSON or TOML)");
  app.add_flag("--strict", g.strict, "Raise on zero divisors instead of flooring at 1e-12");
  app.add_flag("--renormalize", g.renormalize, "Renormalize probabilities over the label words");
  app.add_flag("--metric-override", g.metric_override,
               "Allow a manifest metric that disagrees with its balanced flag");
  app.add_option("--f1", g.f1, "F1 variant: macro | micro | binary");
  app.add_option("--method", g.method, "NONE | CC | PMI_DC | CBM | PENALTY");
  app.add_option("--prior-source", g.prior_source, "mask_only | empty_template");
  app.add_option("--seeds,--seed", g.seeds, "Random seeds")->delimiter(',');
  app.add_option("--shots", g.shots, "Shot counts")->delimiter(',');
  app.add_flag("--shots-total", g.shots_total, "Shot counts are totals rather than per class");
  app.add_flag("--any-shots", g.any_shots, "Allow shot counts outside {1,2,4,8,16}");
  app.add_option("--epochs", g.epochs, "Training epochs");
  app.add_option("--lr", g.lr, "Learning rate");

  InputPaths validate_in, calibrate_in, train_in, evaluate_in, sweep_in;

  auto* validate = app.add_subcommand("validate", "Check input files");
  add_inputs(validate, validate_in);
  std::string validate_cal;
  validate->add_option("--calibrator", validate_cal, "Calibrator file to check as well");

  auto* calibrate = app.add_subcommand("calibrate", "Write calibrated scores and predictions");
  add_inputs(calibrate, calibrate_in);
  std::string cal_split = "test", cal_out, cal_spec;
  calibrate->add_option("--split", cal_split, "test | train | all");
  calibrate->add_option("--out", cal_out, "Output CSV (default stdout)");
  calibrate->add_option("--out-spec", cal_spec, "Write the calibrator parameters here");

  auto* train = app.add_subcommand("train", "Few-shot grid over shots x seeds");
  add_inputs(train, train_in);
  TrainArgs targs;
  train->add_option("--methods", targs.methods, "Trainable methods (PENALTY, CC)")->delimiter(',');
  train->add_option("--report", targs.report, "Grid CSV");
  train->add_option("--report-json", targs.report_json, "Grid JSON with per-seed values");
  train->add_option("--text", targs.text, "Aligned text table");
  train->add_option("--out-spec", targs.out_spec, "Trained calibrator of the first method");
  train->add_option("--export-shots", targs.export_shots, "Shot count for --out-spec (default max)");
  auto* seed_opt = train->add_option("--export-seed", targs.export_seed,
                                     "Seed for --out-spec (default first seed)");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a calibrator on a split");
  add_inputs(evaluate_cmd, evaluate_in);
  std::string eval_cal, eval_split = "test", eval_out;
  evaluate_cmd->add_option("--calibrator", eval_cal, "Calibrator file (default: zero-shot --method)");
  evaluate_cmd->add_option("--split", eval_split, "test | train | all");
  evaluate_cmd->add_option("--out", eval_out, "Report JSON (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Accuracy versus positive-class threshold");
  add_inputs(sweep, sweep_in);
  SweepArgs sargs;
  sweep->add_option("--positive-index", sargs.positive_index, "Index of the positive label word");
  sweep->add_option("--grid-step", sargs.grid_step, "Threshold grid step in (0, 0.5]");
  sweep->add_option("--score", sargs.score, "raw | ratio");
  sweep->add_option("--split", sargs.split, "test | train | all");
  sweep->add_option("--out", sargs.out, "Curve CSV (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Per-language deltas grouped by language metadata");
  AnalyzeArgs aargs;
  analyze->add_option("--baseline", aargs.baseline, "Baseline metrics: report JSON or CSV[#column]")
      ->required();
  analyze->add_option("--calibrated", aargs.calibrated, "Calibrated metrics (repeatable)")
      ->required();
  analyze->add_option("--languages", aargs.languages, "Language table TSV");
  analyze->add_option("--min-size", aargs.min_size, "Smallest family kept");
  analyze->add_option("--unknown", aargs.unknown, "Languages missing from the table: skip | error");
  analyze->add_option("--out-dir", aargs.out_dir, "Directory for the CSV outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = resolve_config(app, g);
    if (validate->parsed()) return cmd_validate(validate_in, cfg, validate_cal);
    if (calibrate->parsed()) return cmd_calibrate(calibrate_in, cfg, cal_split, cal_out, cal_spec);
    if (train->parsed()) {
      targs.export_seed_set = seed_opt->count() > 0;
      return cmd_train(train_in, cfg, targs);
    }
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_in, cfg, eval_cal, eval_split, eval_out);
    if (sweep->parsed()) return cmd_sweep(sweep_in, cfg, sargs);
    if (analyze->parsed()) return cmd_analyze(cfg, aargs);
  } catch (const Error& e) {
    log::error(e.what());
    return 1;
  } catch (const std::exception& e) {
    log::error(std::string("internal error: ") + e.what());
    return 2;
  }
  return 2;
}
