// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/fewshot.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "calprompt/errors.hpp"
#include "calprompt/rng.hpp"
#include "calprompt/stats.hpp"

namespace calprompt {

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw PreconditionError("epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw PreconditionError("learning rate must be > 0");
  if (cfg.shots < 1) throw PreconditionError("shot count must be >= 1");
  if (!cfg.any_shot_count &&
      std::find(kDefaultShotCounts.begin(), kDefaultShotCounts.end(), cfg.shots) ==
          kDefaultShotCounts.end()) {
    throw PreconditionError("shot count " + std::to_string(cfg.shots) +
                            " not in {1, 2, 4, 8, 16}; pass --any-shots to allow it");
  }
}

ShotSet sample_shots(std::span<const LabelProbRecord> train, std::size_t num_labels,
                     std::size_t k, std::uint64_t seed) {
  if (train.empty()) throw PreconditionError("sample_shots: empty train split");
  if (k < 1) throw PreconditionError("sample_shots: k must be >= 1");

  std::vector<std::vector<std::size_t>> by_class(num_labels);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].gold >= num_labels) {
      throw PreconditionError("sample_shots: record '" + train[i].example_id +
                              "' has gold label outside [0, L)");
    }
    by_class[train[i].gold].push_back(i);
  }

  ShotSet set;
  set.seed = seed;
  set.k = k;
  SplitMix64 rng(seed);
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < num_labels; ++c) {
    auto& pool = by_class[c];
    if (pool.size() < k) {
      set.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(pool.size()) +
                             " train records, fewer than k=" + std::to_string(k) +
                             "; using all of them");
    }
    const std::size_t take = std::min(k, pool.size());
    // partial Fisher-Yates from the front
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      chosen.push_back(pool[i]);
    }
  }
  shuffle(chosen, rng);
  set.shots.reserve(chosen.size());
  for (auto idx : chosen) set.shots.push_back(train[idx]);
  return set;
}

ShotSet sample_shots_total(std::span<const LabelProbRecord> train, std::size_t k,
                           std::uint64_t seed) {
  if (train.empty()) throw PreconditionError("sample_shots: empty train split");
  if (k < 1) throw PreconditionError("sample_shots: k must be >= 1");
  ShotSet set;
  set.seed = seed;
  set.k = k;
  if (train.size() < k) {
    set.warnings.push_back("train split has " + std::to_string(train.size()) +
                           " records, fewer than k=" + std::to_string(k) + "; using all of them");
  }
  std::vector<std::size_t> idx(train.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  SplitMix64 rng(seed);
  const std::size_t take = std::min(k, idx.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  set.shots.reserve(take);
  for (auto i : idx) set.shots.push_back(train[i]);
  return set;
}

Vector train_penalty(std::span<const LabelProbRecord> shots, std::span<const double> init,
                     const TrainConfig& cfg) {
  if (shots.empty()) throw PreconditionError("train_penalty: empty shot set");
  if (cfg.epochs < 1 || !(cfg.learning_rate > 0.0)) {
    throw PreconditionError("train_penalty: invalid epochs or learning rate");
  }
  Vector penalty(init.begin(), init.end());
  for (const auto& s : shots) {
    if (s.probs.size() != penalty.size()) {
      throw DimensionError("train_penalty: shot '" + s.example_id + "' has wrong length");
    }
    if (s.gold >= penalty.size()) throw PreconditionError("train_penalty: gold out of range");
  }

  const double eta = cfg.learning_rate;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& s : shots) {
      const std::size_t guess = predict(apply_penalty(s.probs, penalty));
      if (guess != s.gold) {
        penalty[guess] += eta;
        penalty[s.gold] -= eta;
      }
    }
  }
  return penalty;
}

CcParams train_cc(std::span<const LabelProbRecord> shots, std::span<const double> prior,
                  const TrainConfig& cfg, const NumericPolicy& policy) {
  if (shots.empty()) throw PreconditionError("train_cc: empty shot set");
  if (cfg.epochs < 1 || !(cfg.learning_rate > 0.0)) {
    throw PreconditionError("train_cc: invalid epochs or learning rate");
  }
  CcParams params{cc_weights(prior, policy), Vector(prior.size(), 0.0)};
  for (const auto& s : shots) {
    if (s.probs.size() != prior.size()) {
      throw DimensionError("train_cc: shot '" + s.example_id + "' has wrong length");
    }
    if (s.gold >= prior.size()) throw PreconditionError("train_cc: gold out of range");
  }

  const double eta = cfg.learning_rate;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& s : shots) {
      const std::size_t guess = predict(apply_affine(s.probs, params.weights, params.bias));
      if (guess != s.gold) {
        params.bias[guess] -= eta;
        params.bias[s.gold] += eta;
      }
    }
  }
  return params;
}

namespace {

std::vector<LabelProbRecord> split_of(std::span<const LabelProbRecord> records, Split split) {
  std::vector<LabelProbRecord> out;
  for (const auto& r : records) {
    if (r.split == split) out.push_back(r);
  }
  return out;
}

}  // namespace

CalibratorSpec train_calibrator(Method method, std::span<const LabelProbRecord> train,
                                const TaskManifest& manifest, const PriorProfile& priors,
                                std::size_t k, std::uint64_t seed, const GridOptions& options,
                                std::vector<std::string>* warnings) {
  if (method != Method::Penalty && method != Method::CC) {
    throw PreconditionError("only PENALTY and CC are trainable, got " +
                            std::string(to_string(method)));
  }
  CalibratorSpec spec = make_zero_shot(method, priors, options.eval.numeric, options.prior_source);
  if (k == 0) return spec;

  TrainConfig cfg = options.train;
  cfg.seed = seed;
  cfg.shots = k;
  validate(cfg);

  ShotSet shots = cfg.shots_total ? sample_shots_total(train, k, seed)
                                  : sample_shots(train, manifest.num_labels(), k, seed);
  if (warnings) {
    for (auto& w : shots.warnings) {
      warnings->push_back(std::string(to_string(method)) + " k=" + std::to_string(k) +
                          " seed=" + std::to_string(seed) + ": " + w);
    }
  }
  if (method == Method::Penalty) {
    spec.penalty = train_penalty(shots.shots, spec.penalty, cfg);
  } else {
    const Vector& prior =
        select_prior(priors, options.prior_source.value_or(default_prior_source(method)));
    auto params = train_cc(shots.shots, prior, cfg, options.eval.numeric);
    spec.cc_w = std::move(params.weights);
    spec.cc_b = std::move(params.bias);
  }
  return spec;
}

GridReport run_grid(const TaskManifest& manifest, std::span<const LabelProbRecord> records,
                    const PriorProfile& priors, const GridOptions& options) {
  if (options.seeds.empty()) throw PreconditionError("run_grid: no seeds");
  const auto train = split_of(records, Split::Train);
  const auto test = split_of(records, Split::Test);
  if (test.empty()) throw PreconditionError("run_grid: test split is empty");

  std::vector<std::size_t> shot_counts{0};
  for (auto k : options.shot_counts) {
    if (k != 0 && std::find(shot_counts.begin(), shot_counts.end(), k) == shot_counts.end()) {
      shot_counts.push_back(k);
    }
  }
  std::sort(shot_counts.begin(), shot_counts.end());

  GridReport report;
  report.task = manifest.task;
  report.metric = manifest.metric;
  for (Method method : options.methods) {
    for (std::size_t k : shot_counts) {
      GridCell cell;
      cell.method = method;
      cell.shots = k;
      double zero_shot_value = 0.0;
      if (k == 0) {
        const auto spec = train_calibrator(method, train, manifest, priors, 0, 0, options);
        zero_shot_value = evaluate(test, spec, manifest, options.eval).metric;
      }
      for (auto seed : options.seeds) {
        double value = zero_shot_value;
        if (k != 0) {
          const auto spec =
              train_calibrator(method, train, manifest, priors, k, seed, options, &report.warnings);
          value = evaluate(test, spec, manifest, options.eval).metric;
        }
        cell.seeds.push_back(seed);
        cell.values.push_back(value);
      }
      cell.mean = mean(cell.values);
      cell.std = sample_std(cell.values);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string render_grid_text(const GridReport& report) {
  std::vector<Method> methods;
  std::vector<std::size_t> shots;
  for (const auto& c : report.cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
      methods.push_back(c.method);
    }
    if (std::find(shots.begin(), shots.end(), c.shots) == shots.end()) shots.push_back(c.shots);
  }
  std::sort(shots.begin(), shots.end());

  auto cell_text = [&](Method m, std::size_t k) -> std::string {
    for (const auto& c : report.cells) {
      if (c.method != m || c.shots != k) continue;
      char buf[64];
      if (k == 0) {
        std::snprintf(buf, sizeof buf, "%.1f", 100.0 * c.mean);
      } else {
        std::snprintf(buf, sizeof buf, "%.1f_{%.1f}", 100.0 * c.mean, 100.0 * c.std);
      }
      return buf;
    }
    return "-";
  };

  std::ostringstream os;
  os << "task: " << report.task << "  metric: " << to_string(report.metric) << "\n";
  os << std::left << std::setw(8) << "shots";
  for (Method m : methods) os << std::setw(16) << to_string(m);
  os << "\n";
  for (std::size_t k : shots) {
    os << std::setw(8) << (k == 0 ? std::string("0") : std::to_string(k));
    for (Method m : methods) os << std::setw(16) << cell_text(m, k);
    os << "\n";
  }
  return os.str();
}

}  // namespace calprompt
