// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "multiscopic/cost.hpp"

namespace multiscopic {

enum class FusionRule { Mean, Min, Heuristic };

std::string_view to_string(FusionRule rule) noexcept;
std::optional<FusionRule> parse_fusion(std::string_view name) noexcept;

inline constexpr double kDefaultHeuristicRatio = 3.0;

// Per-cell rules over the in-bounds entries only. All return NaN (the
// out-of-bounds marker) for an empty input.
float mean_of(std::span<const float> costs) noexcept;
float min_of(std::span<const float> costs) noexcept;

/// Sort ascending, keep the three smallest c1 <= c2 <= c3; if c3 > ratio*c2
/// return (c1+c2)/2, else (c1+c2+c3)/3. Two entries give the minimum, one
/// entry passes through.
float heuristic_of(std::span<const float> costs, double ratio = kDefaultHeuristicRatio) noexcept;

// Volume fusion. Need at least two volumes with identical layout; a cell is
// fused from the volumes where it is in bounds and stays out of bounds when
// it is in none.
CostVolume fuse_mean(std::span<const CostVolume> volumes);
CostVolume fuse_min(std::span<const CostVolume> volumes);
CostVolume fuse_heuristic(std::span<const CostVolume> volumes, double ratio = kDefaultHeuristicRatio);
CostVolume fuse(std::span<const CostVolume> volumes, FusionRule rule,
                double ratio = kDefaultHeuristicRatio);

} // namespace multiscopic
