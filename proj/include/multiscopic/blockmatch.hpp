// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "multiscopic/capture.hpp"
#include "multiscopic/cost.hpp"
#include "multiscopic/fusion.hpp"
#include "multiscopic/image.hpp"

namespace multiscopic {

/// Per-pixel argmin over the in-bounds disparities, ties to the smaller d.
/// Pixels without any in-bounds entry are invalid.
DisparityMap wta(const CostVolume& volume);

/// Parabola vertex offset through (-1, prev), (0, mid), (+1, next). Empty
/// when the parabola does not open upwards (denominator <= 0).
std::optional<double> subpixel_offset(double prev, double mid, double next) noexcept;

/// Refines integer disparities that have both neighbours in range and in
/// bounds; every other pixel keeps its integer value.
DisparityMap subpixel_refine(const CostVolume& volume, const DisparityMap& integer_map);

struct BmParams {
    int radius = 5;
    int d_min = 1;
    int d_max = 60;
    FusionRule fusion = FusionRule::Heuristic;
    double heuristic_ratio = kDefaultHeuristicRatio;
    bool subpixel = true;

    /// Block side 2*radius+1 -> radius; throws ArgumentError for even or
    /// non-positive sizes.
    static int radius_from_block_size(int block_size);
};

/// One SAD volume per surrounding view, fused by `params.fusion` (a single
/// view is used as is, which is plain stereo block matching).
CostVolume bm_cost_volume(const MultiscopicSet& set, const BmParams& params);

/// Fused SAD volume, winner-take-all, then optional subpixel refinement.
DisparityMap match_bm(const MultiscopicSet& set, const BmParams& params);

} // namespace multiscopic
