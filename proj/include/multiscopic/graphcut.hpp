// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "multiscopic/capture.hpp"
#include "multiscopic/cost.hpp"
#include "multiscopic/fusion.hpp"
#include "multiscopic/image.hpp"

namespace multiscopic {

struct GcParams {
    /// Occlusion penalty K, in intensity units like the data term.
    double occlusion_penalty = 10.0;
    double lambda1 = 9.0;
    double lambda2 = 3.0;
    double theta = 8.0;
    int d_cutoff = 5;
    int d_min = 1;
    int d_max = 60;
    int upscale = 1;
    int max_sweeps = 4;
    std::uint64_t seed = 1;
    FusionRule fusion = FusionRule::Heuristic;
    double heuristic_ratio = kDefaultHeuristicRatio;
    BtVariant bt_variant = BtVariant::Interval;
    /// Energy terms are multiplied by this and rounded to integers before
    /// optimization.
    int energy_scale = 16;

    /// Throws ArgumentError when a field is outside its domain.
    void validate() const;
};

inline constexpr int kOccluded = std::numeric_limits<int>::min();

/// One label per centre pixel: a disparity or kOccluded.
class Labeling {
public:
    Labeling(int width, int height, int fill = kOccluded);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int at(int x, int y) const noexcept { return labels_[index(x, y)]; }
    void set(int x, int y, int label) noexcept { labels_[index(x, y)] = label; }
    bool occluded(int x, int y) const noexcept { return at(x, y) == kOccluded; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::span<int> labels() noexcept { return labels_; }

    friend bool operator==(const Labeling&, const Labeling&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<int> labels_;
};

using Energy = std::int64_t;

/// Integer energy over a labeling: data cost per labeled pixel, a fixed
/// penalty per occluded pixel and weight * min(|d1 - d2|, cutoff) per pair of
/// labeled 4-neighbours.
class EnergyModel {
public:
    /// Data costs start undefined: a pixel cannot take a label whose cost
    /// was never set.
    EnergyModel(int width, int height, int d_min, int d_max, Energy occlusion_penalty, int d_cutoff);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int d_min() const noexcept { return d_min_; }
    int d_max() const noexcept { return d_max_; }
    Energy occlusion_penalty() const noexcept { return occlusion_penalty_; }
    int d_cutoff() const noexcept { return d_cutoff_; }

    /// Throws ArgumentError for negative costs.
    void set_data(int x, int y, int d, Energy cost);
    bool allows(int x, int y, int d) const noexcept { return data_[data_index(x, y, d)] >= 0; }
    /// Meaningful only when allows(x, y, d).
    Energy data(int x, int y, int d) const noexcept { return data_[data_index(x, y, d)]; }

    /// Weight of the pair (x, y)-(x+1, y) and of (x, y)-(x, y+1).
    void set_right_weight(int x, int y, Energy weight);
    void set_down_weight(int x, int y, Energy weight);
    Energy right_weight(int x, int y) const noexcept { return right_[pixel_index(x, y)]; }
    Energy down_weight(int x, int y) const noexcept { return down_[pixel_index(x, y)]; }

    /// Cost of one label at one pixel including the occlusion case.
    Energy unary(int x, int y, int label) const noexcept {
        return label == kOccluded ? occlusion_penalty_ : data(x, y, label);
    }
    Energy pair(Energy weight, int a, int b) const noexcept;

    /// Throws ArgumentError on a shape mismatch, a label outside the range
    /// or a label the pixel does not allow.
    Energy energy(const Labeling& labeling) const;

private:
    std::size_t pixel_index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }
    std::size_t data_index(int x, int y, int d) const noexcept {
        return pixel_index(x, y) * static_cast<std::size_t>(d_max_ - d_min_ + 1) +
               static_cast<std::size_t>(d - d_min_);
    }

    int width_;
    int height_;
    int d_min_;
    int d_max_;
    Energy occlusion_penalty_;
    int d_cutoff_;
    std::vector<std::int32_t> data_;
    std::vector<Energy> right_;
    std::vector<Energy> down_;
};

/// Fused pixelwise BT volume over [params.d_min, params.d_max] at the set's
/// own resolution (a single view is used as is).
CostVolume gc_cost_volume(const MultiscopicSet& set, const GcParams& params);

/// Smoothness weight of a neighbour pair: lambda1 when the centre
/// intensities differ by less than theta and some common disparity in range
/// keeps every in-bounds surround correspondence pair below theta as well,
/// lambda2 otherwise. `set` must be single-channel.
double pair_lambda(const MultiscopicSet& set, int x1, int y1, int x2, int y2, const GcParams& params);

/// Energy terms scaled by params.energy_scale, at the set's own resolution
/// (upscaling is applied by match_gc only).
EnergyModel build_energy_model(const MultiscopicSet& set, const GcParams& params);

/// Energy in intensity units. Pre: labeling dimensions match the set.
double energy(const MultiscopicSet& set, const Labeling& labeling, const GcParams& params);

/// One expansion move. Every pixel decides independently whether to end at
/// alpha; otherwise a labeled pixel keeps its label, and a pixel that is
/// occluded or already at alpha becomes occluded. Returns the minimum-energy
/// labeling of that move space, so energy never increases.
Labeling expand(const Labeling& labeling, int alpha, const EnergyModel& model);
Labeling expand(const Labeling& labeling, int alpha, const MultiscopicSet& set, const GcParams& params);

struct GcResult {
    DisparityMap disparity;
    /// At the optimization (upscaled) resolution.
    Labeling labeling;
    /// Integer energy of the initial labeling and after every move.
    std::vector<Energy> energy_trace;
    int sweeps = 0;
    int moves = 0;
    /// Moves that raised the energy; always 0 for a correct solver.
    int energy_violations = 0;
};

GcResult match_gc_detailed(const MultiscopicSet& set, const GcParams& params);
DisparityMap match_gc(const MultiscopicSet& set, const GcParams& params);

} // namespace multiscopic
