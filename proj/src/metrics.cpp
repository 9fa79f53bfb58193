// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/metrics.hpp"

#include <cmath>
#include <string>

#include "calprompt/errors.hpp"

namespace calprompt {

namespace {

void check_pair(std::span<const std::size_t> preds, std::span<const std::size_t> golds) {
  if (preds.size() != golds.size()) {
    throw DimensionError("metric: preds has " + std::to_string(preds.size()) + " entries, golds " +
                         std::to_string(golds.size()));
  }
  if (preds.empty()) throw PreconditionError("metric: empty prediction list");
}

}  // namespace

ConfusionMatrix ConfusionMatrix::from(std::span<const std::size_t> preds,
                                      std::span<const std::size_t> golds,
                                      std::size_t num_labels) {
  check_pair(preds, golds);
  ConfusionMatrix cm(num_labels);
  for (std::size_t i = 0; i < preds.size(); ++i) cm.add(golds[i], preds[i]);
  return cm;
}

void ConfusionMatrix::add(std::size_t gold, std::size_t pred) {
  if (gold >= n_ || pred >= n_) {
    throw PreconditionError("confusion matrix: label index out of range (gold " +
                            std::to_string(gold) + ", pred " + std::to_string(pred) + ", L " +
                            std::to_string(n_) + ")");
  }
  ++counts_[gold * n_ + pred];
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw DimensionError("confusion matrix: label count mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::correct() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

std::uint64_t ConfusionMatrix::support(std::size_t label) const {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < n_; ++j) t += at(label, j);
  return t;
}

std::uint64_t ConfusionMatrix::predicted(std::size_t label) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += at(i, label);
  return t;
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  if (t == 0) throw PreconditionError("accuracy: empty confusion matrix");
  return static_cast<double>(correct()) / static_cast<double>(t);
}

double ConfusionMatrix::class_f1(std::size_t label) const {
  // 2PR/(P+R) reduces to 2TP/(2TP+FP+FN); both vanish together when TP = 0.
  const double tp = static_cast<double>(at(label, label));
  const double fp = static_cast<double>(predicted(label)) - tp;
  const double fn = static_cast<double>(support(label)) - tp;
  if (tp == 0.0) return 0.0;
  const double precision = tp / (tp + fp);
  const double recall = tp / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double ConfusionMatrix::macro_f1() const {
  if (total() == 0) throw PreconditionError("macro_f1: empty confusion matrix");
  double sum = 0.0;
  for (std::size_t c = 0; c < n_; ++c) sum += class_f1(c);
  return sum / static_cast<double>(n_);
}

double accuracy(std::span<const std::size_t> preds, std::span<const std::size_t> golds) {
  check_pair(preds, golds);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == golds[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double macro_f1(std::span<const std::size_t> preds, std::span<const std::size_t> golds,
                std::size_t num_labels) {
  return ConfusionMatrix::from(preds, golds, num_labels).macro_f1();
}

double f1_score(std::span<const std::size_t> preds, std::span<const std::size_t> golds,
                std::size_t num_labels, F1Variant variant) {
  switch (variant) {
    case F1Variant::Macro:
      return macro_f1(preds, golds, num_labels);
    case F1Variant::Micro:
      ConfusionMatrix::from(preds, golds, num_labels);  // range checks
      return accuracy(preds, golds);
    case F1Variant::Binary:
      if (num_labels != 2) throw PreconditionError("binary F1 requires exactly 2 labels");
      return ConfusionMatrix::from(preds, golds, num_labels).class_f1(1);
  }
  return 0.0;
}

ThresholdCurve threshold_sweep(std::span<const double> pos_probs,
                               std::span<const std::size_t> golds, double grid_step) {
  if (pos_probs.size() != golds.size()) throw DimensionError("threshold_sweep: length mismatch");
  if (pos_probs.empty()) throw PreconditionError("threshold_sweep: empty input");
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw PreconditionError("threshold_sweep: grid_step must lie in (0, 0.5]");
  }
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] > 1) throw PreconditionError("threshold_sweep: non-binary gold label");
    if (!(pos_probs[i] >= 0.0 && pos_probs[i] <= 1.0)) {
      throw DomainError("threshold_sweep: positive probability outside [0,1]");
    }
  }

  std::vector<double> taus;
  const double inverse = 1.0 / grid_step;
  const double rounded = std::round(inverse);
  if (std::abs(inverse - rounded) < 1e-9) {
    const auto n = static_cast<std::size_t>(rounded);
    for (std::size_t i = 0; i <= n; ++i) taus.push_back(static_cast<double>(i) / rounded);
  } else {
    for (std::size_t i = 0;; ++i) {
      const double tau = static_cast<double>(i) * grid_step;
      if (tau > 1.0) break;
      taus.push_back(tau);
    }
    if (taus.back() < 1.0) taus.push_back(1.0);
  }

  ThresholdCurve curve;
  curve.grid.reserve(taus.size());
  const double n = static_cast<double>(golds.size());
  for (double tau : taus) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      const std::size_t pred = pos_probs[i] >= tau ? 1 : 0;
      hits += pred == golds[i];
    }
    const double acc = static_cast<double>(hits) / n;
    curve.grid.push_back({tau, acc});
    if (curve.grid.size() == 1 || acc > curve.best_accuracy) {
      curve.best_accuracy = acc;
      curve.best_tau = tau;
    }
  }
  return curve;
}

double positive_probability(std::span<const double> probs, std::size_t positive_index,
                            PositiveScore mode) {
  if (positive_index >= probs.size()) throw PreconditionError("positive label index out of range");
  if (mode == PositiveScore::Raw) return probs[positive_index];
  if (probs.size() != 2) throw PreconditionError("pair-ratio positive score requires 2 labels");
  const double denom = probs[0] + probs[1];
  if (!(denom > 0.0)) return 0.5;
  return probs[positive_index] / denom;
}

F1Variant parse_f1_variant(std::string_view s) {
  if (s == "macro") return F1Variant::Macro;
  if (s == "micro") return F1Variant::Micro;
  if (s == "binary") return F1Variant::Binary;
  throw PreconditionError("unknown F1 variant '" + std::string(s) + "' (macro|micro|binary)");
}

std::string_view to_string(F1Variant v) {
  switch (v) {
    case F1Variant::Macro: return "macro";
    case F1Variant::Micro: return "micro";
    case F1Variant::Binary: return "binary";
  }
  return "?";
}

}  // namespace calprompt
