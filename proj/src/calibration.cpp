// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#include "calprompt/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "calprompt/errors.hpp"

namespace calprompt {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

double floored(double v, const NumericPolicy& policy, const char* what) {
  if (std::isnan(v)) throw DomainError(std::string(what) + ": NaN operand");
  if (policy.strict) {
    if (v <= 0.0) throw DomainError(std::string(what) + ": non-positive operand in strict mode");
    return v;
  }
  return std::max(v, policy.epsilon);
}

}  // namespace

Vector apply_cc(std::span<const double> probs, std::span<const double> prior,
                std::span<const double> bias, const NumericPolicy& policy) {
  require_same_length(probs.size(), prior.size(), "apply_cc");
  require_same_length(probs.size(), bias.size(), "apply_cc bias");
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] / floored(prior[i], policy, "apply_cc prior") + bias[i];
  }
  return out;
}

Vector apply_cc(std::span<const double> probs, std::span<const double> prior,
                const NumericPolicy& policy) {
  const Vector zeros(probs.size(), 0.0);
  return apply_cc(probs, prior, zeros, policy);
}

Vector apply_affine(std::span<const double> probs, std::span<const double> weights,
                    std::span<const double> bias) {
  require_same_length(probs.size(), weights.size(), "apply_affine weights");
  require_same_length(probs.size(), bias.size(), "apply_affine bias");
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = weights[i] * probs[i] + bias[i];
  return out;
}

Vector cc_weights(std::span<const double> prior, const NumericPolicy& policy) {
  Vector w(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    w[i] = 1.0 / floored(prior[i], policy, "cc_weights prior");
  }
  return w;
}

Vector apply_pmi(std::span<const double> probs, std::span<const double> prior,
                 const NumericPolicy& policy) {
  require_same_length(probs.size(), prior.size(), "apply_pmi");
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = std::log(floored(probs[i], policy, "apply_pmi probs") /
                      floored(prior[i], policy, "apply_pmi prior"));
  }
  return out;
}

Vector column_means(const Matrix& rows) {
  if (rows.empty()) throw PreconditionError("column_means: empty matrix");
  const std::size_t n = rows.size();
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) require_same_length(r.size(), width, "column_means row");

  Vector means(width);
  Vector column(n);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t x = 0; x < n; ++x) column[x] = rows[x][j];
    // canonical summation order: ascending values
    std::sort(column.begin(), column.end());
    means[j] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(n);
  }
  return means;
}

CbmResult apply_cbm(const Matrix& probs, const NumericPolicy& policy) {
  if (probs.empty()) throw PreconditionError("apply_cbm: empty matrix");
  CbmResult result;
  result.means = column_means(probs);
  Vector divisor(result.means.size());
  for (std::size_t j = 0; j < divisor.size(); ++j) {
    divisor[j] = floored(result.means[j], policy, "apply_cbm column mean");
  }
  result.scores.reserve(probs.size());
  for (const auto& row : probs) {
    Vector q(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) q[j] = row[j] / divisor[j];
    result.scores.push_back(std::move(q));
  }
  return result;
}

Vector apply_penalty(std::span<const double> probs, std::span<const double> penalty) {
  require_same_length(probs.size(), penalty.size(), "apply_penalty");
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] - penalty[i];
  return out;
}

std::size_t predict(std::span<const double> scores) {
  if (scores.empty()) throw PreconditionError("predict: empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw DomainError("predict: NaN score at index " + std::to_string(i));
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

Vector renormalize(std::span<const double> probs, const NumericPolicy& policy) {
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  const double denom = floored(total, policy, "renormalize total");
  Vector out(probs.begin(), probs.end());
  for (auto& v : out) v /= denom;
  return out;
}

PriorSource default_prior_source(Method m) {
  return m == Method::PmiDc ? PriorSource::EmptyTemplate : PriorSource::MaskOnly;
}

const Vector& select_prior(const PriorProfile& priors, PriorSource source) {
  return source == PriorSource::MaskOnly ? priors.mask_only : priors.empty_template;
}

CalibratorSpec make_zero_shot(Method method, const PriorProfile& priors,
                              const NumericPolicy& policy, std::optional<PriorSource> source) {
  CalibratorSpec spec;
  spec.method = method;
  const Vector& prior = select_prior(priors, source.value_or(default_prior_source(method)));
  switch (method) {
    case Method::None:
    case Method::Cbm:
      break;
    case Method::CC:
      spec.cc_w = cc_weights(prior, policy);
      spec.cc_b.assign(prior.size(), 0.0);
      break;
    case Method::PmiDc:
      spec.pmi_prior = prior;
      break;
    case Method::Penalty:
      spec.penalty = prior;
      break;
  }
  return spec;
}

void check_spec(const CalibratorSpec& spec, std::size_t num_labels) {
  auto need = [&](const Vector& v, const char* name) {
    if (v.size() != num_labels) {
      throw DimensionError(std::string("calibrator field ") + name + " has length " +
                           std::to_string(v.size()) + ", expected " + std::to_string(num_labels));
    }
  };
  switch (spec.method) {
    case Method::None:
      break;
    case Method::CC:
      need(spec.cc_w, "cc_w");
      need(spec.cc_b, "cc_b");
      for (double w : spec.cc_w) {
        if (!(w > 0.0)) throw DomainError("calibrator field cc_w must be positive");
      }
      break;
    case Method::PmiDc:
      need(spec.pmi_prior, "pmi_prior");
      break;
    case Method::Cbm:
      if (!spec.cbm_means.empty()) {
        need(spec.cbm_means, "cbm_means");
        for (double m : spec.cbm_means) {
          if (!(m > 0.0)) throw DomainError("calibrator field cbm_means must be positive");
        }
      }
      break;
    case Method::Penalty:
      need(spec.penalty, "penalty");
      break;
  }
}

Matrix calibrate_all(const Matrix& probs, const CalibratorSpec& spec, const NumericPolicy& policy,
                     Vector* cbm_means_out) {
  if (spec.method == Method::Cbm) {
    auto result = apply_cbm(probs, policy);
    if (cbm_means_out) *cbm_means_out = std::move(result.means);
    return std::move(result.scores);
  }
  Matrix scores;
  scores.reserve(probs.size());
  for (const auto& p : probs) {
    switch (spec.method) {
      case Method::None:
        scores.push_back(p);
        break;
      case Method::CC:
        scores.push_back(apply_affine(p, spec.cc_w, spec.cc_b));
        break;
      case Method::PmiDc:
        scores.push_back(apply_pmi(p, spec.pmi_prior, policy));
        break;
      case Method::Penalty:
        scores.push_back(apply_penalty(p, spec.penalty));
        break;
      case Method::Cbm:
        break;
    }
  }
  return scores;
}

}  // namespace calprompt
