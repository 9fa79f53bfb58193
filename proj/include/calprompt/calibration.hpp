// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

/**
 * @file calibration.hpp
 * @brief The four label-word calibration transforms and argmax prediction.
 *
 *   CC       q_i = p_i / prior_i + b_i          (prior = mask-only output)
 *   PMI_DC   q_i = ln(p_i / prior_i)            (prior = empty-template output)
 *   CBM      q_xi = p_xi / mean_x'(p_x'i)       (mean over the evaluated set)
 *   PENALTY  q_i = p_i - penalty_i              (penalty starts at the prior)
 *
 * Scores are plain reals, not probabilities. Divisors and log operands are
 * floored at NumericPolicy::epsilon unless the policy is strict, in which
 * case non-positive operands throw DomainError.
 *
 * All functions except apply_cbm are pure per record. apply_cbm reduces over
 * every row before scoring; its column sums are taken over values in sorted
 * order so the result does not depend on row order.
 */

#include <cstddef>
#include <span>

#include "calprompt/types.hpp"

namespace calprompt {

Vector apply_cc(std::span<const double> probs, std::span<const double> prior,
                std::span<const double> bias, const NumericPolicy& policy = {});

// Zero-bias form used for zero-shot CC.
Vector apply_cc(std::span<const double> probs, std::span<const double> prior,
                const NumericPolicy& policy = {});

// q = w .* p + b, the general diagonal affine map used once CC is trained.
Vector apply_affine(std::span<const double> probs, std::span<const double> weights,
                    std::span<const double> bias);

// Diagonal of W = diag(prior)^-1.
Vector cc_weights(std::span<const double> prior, const NumericPolicy& policy = {});

Vector apply_pmi(std::span<const double> probs, std::span<const double> prior,
                 const NumericPolicy& policy = {});

struct CbmResult {
  Matrix scores;
  Vector means;
};

CbmResult apply_cbm(const Matrix& probs, const NumericPolicy& policy = {});

// Column means used by CBM, row-order independent.
Vector column_means(const Matrix& rows);

Vector apply_penalty(std::span<const double> probs, std::span<const double> penalty);

// Index of the maximum score, lowest index on ties. Throws DomainError on NaN.
std::size_t predict(std::span<const double> scores);

// Rescale so the entries sum to one. Used only by the --renormalize
// preprocessing step.
Vector renormalize(std::span<const double> probs, const NumericPolicy& policy = {});

enum class PriorSource { MaskOnly, EmptyTemplate };

// Default prior source per method: empty-template for PMI_DC, mask-only for
// CC and PENALTY.
PriorSource default_prior_source(Method m);

const Vector& select_prior(const PriorProfile& priors, PriorSource source);

// Zero-shot parameter state for `method`. CBM means are left empty; they are
// filled in from the evaluated set.
CalibratorSpec make_zero_shot(Method method, const PriorProfile& priors,
                              const NumericPolicy& policy = {},
                              std::optional<PriorSource> source = std::nullopt);

// Scores for every row under `spec`. CBM recomputes its means from `probs`
// and writes them to `cbm_means_out` when non-null.
Matrix calibrate_all(const Matrix& probs, const CalibratorSpec& spec,
                     const NumericPolicy& policy = {}, Vector* cbm_means_out = nullptr);

// Throws if the fields needed by spec.method are missing, have length != L, or
// violate positivity.
void check_spec(const CalibratorSpec& spec, std::size_t num_labels);

}  // namespace calprompt
