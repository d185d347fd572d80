// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/fusion.hpp"

#include <algorithm>
#include <array>

#include "multiscopic/error.hpp"

namespace multiscopic {

std::string_view to_string(FusionRule rule) noexcept {
    switch (rule) {
    case FusionRule::Mean: return "mean";
    case FusionRule::Min: return "min";
    case FusionRule::Heuristic: return "heuristic";
    }
    return "?";
}

std::optional<FusionRule> parse_fusion(std::string_view name) noexcept {
    for (FusionRule rule : {FusionRule::Mean, FusionRule::Min, FusionRule::Heuristic}) {
        if (to_string(rule) == name) {
            return rule;
        }
    }
    return std::nullopt;
}

float mean_of(std::span<const float> costs) noexcept {
    if (costs.empty()) {
        return CostVolume::kMarker;
    }
    double sum = 0.0;
    for (float c : costs) {
        sum += c;
    }
    return static_cast<float>(sum / static_cast<double>(costs.size()));
}

float min_of(std::span<const float> costs) noexcept {
    if (costs.empty()) {
        return CostVolume::kMarker;
    }
    return *std::min_element(costs.begin(), costs.end());
}

float heuristic_of(std::span<const float> costs, double ratio) noexcept {
    if (costs.size() <= 2) {
        return min_of(costs);
    }
    std::array<float, 3> smallest{};
    std::partial_sort_copy(costs.begin(), costs.end(), smallest.begin(), smallest.end());
    const double c1 = smallest[0];
    const double c2 = smallest[1];
    const double c3 = smallest[2];
    if (c3 > ratio * c2) {
        return static_cast<float>((c1 + c2) / 2.0);
    }
    return static_cast<float>((c1 + c2 + c3) / 3.0);
}

namespace {

template <typename Rule>
CostVolume fuse_cells(std::span<const CostVolume> volumes, Rule rule) {
    if (volumes.size() < 2) {
        throw ArgumentError("fusion needs at least two cost volumes");
    }
    for (const auto& v : volumes) {
        if (!v.same_layout(volumes.front())) {
            throw ArgumentError("fused cost volumes must share dimensions and disparity range");
        }
    }
    const CostVolume& first = volumes.front();
    CostVolume out(first.width(), first.height(), first.d_min(), first.d_max());
    auto dst = out.raw();
    std::vector<float> cell;
    cell.reserve(volumes.size());
    for (std::size_t i = 0; i < dst.size(); ++i) {
        cell.clear();
        for (const auto& v : volumes) {
            const float c = v.raw()[i];
            if (!CostVolume::is_marker(c)) {
                cell.push_back(c);
            }
        }
        dst[i] = rule(std::span<const float>(cell));
    }
    return out;
}

} // namespace

CostVolume fuse_mean(std::span<const CostVolume> volumes) {
    return fuse_cells(volumes, [](std::span<const float> c) { return mean_of(c); });
}

CostVolume fuse_min(std::span<const CostVolume> volumes) {
    return fuse_cells(volumes, [](std::span<const float> c) { return min_of(c); });
}

CostVolume fuse_heuristic(std::span<const CostVolume> volumes, double ratio) {
    return fuse_cells(volumes, [ratio](std::span<const float> c) { return heuristic_of(c, ratio); });
}

CostVolume fuse(std::span<const CostVolume> volumes, FusionRule rule, double ratio) {
    switch (rule) {
    case FusionRule::Mean: return fuse_mean(volumes);
    case FusionRule::Min: return fuse_min(volumes);
    case FusionRule::Heuristic: return fuse_heuristic(volumes, ratio);
    }
    throw ArgumentError("unknown fusion rule");
}

} // namespace multiscopic
