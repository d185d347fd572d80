// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "multiscopic/image.hpp"

namespace multiscopic {

/// Disparity error statistics over pixels with valid ground truth.
/// Estimates without a value count as bad for every threshold and are left
/// out of rms and avg_err.
struct EvalReport {
    double rms = 0.0;
    double avg_err = 0.0;
    /// Percent of evaluated pixels with error strictly above 0.5, 1 and 2.
    double bad05 = 0.0;
    double bad1 = 0.0;
    double bad2 = 0.0;
    /// Pixels with valid ground truth.
    std::size_t evaluated = 0;
    /// Pixels skipped because the ground truth is invalid.
    std::size_t excluded = 0;
    /// Evaluated pixels whose estimate is invalid.
    std::size_t invalid_estimates = 0;
};

/// Throws ArgumentError on a dimension mismatch.
EvalReport evaluate(const DisparityMap& estimate, const DisparityMap& ground_truth);

/// As evaluate, restricted to pixels where mask is non-zero.
EvalReport evaluate_masked(const DisparityMap& estimate, const DisparityMap& ground_truth,
                           const ImageBuffer& mask);

/// 100 * (baseline - candidate) / baseline; empty for a zero baseline.
std::optional<double> percent_decrease(double baseline, double candidate) noexcept;

struct Improvement {
    std::optional<double> rms;
    std::optional<double> avg_err;
    std::optional<double> bad05;
    std::optional<double> bad1;
    std::optional<double> bad2;
};

Improvement improvement(const EvalReport& baseline, const EvalReport& candidate) noexcept;

/// Jet colour map over d / d_max clamped to [0, 1]; invalid cells are black.
/// Throws ArgumentError unless d_max > 0.
ImageBuffer colorize(const DisparityMap& map, double d_max);

/// Aligned table with one header row and one value row.
std::string format_table(const EvalReport& report);
/// One `key=value` per line.
std::string format_key_values(const EvalReport& report);
/// Lines like `rms: 4.174 -> 3.176 (↓ 23.9%)`.
std::string format_improvement(const EvalReport& baseline, const EvalReport& candidate);

} // namespace multiscopic
