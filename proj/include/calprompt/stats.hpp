// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <span>

namespace calprompt {

double mean(std::span<const double> values);

// Sample standard deviation (n - 1 denominator); 0 for a single value.
double sample_std(std::span<const double> values);

// Linear-interpolation quantile on sorted input: h = (n-1)q, interpolate
// between floor(h) and ceil(h).
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace calprompt
