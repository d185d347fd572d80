// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/blockmatch.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "multiscopic/error.hpp"

namespace multiscopic {

DisparityMap wta(const CostVolume& volume) {
    DisparityMap map(volume.width(), volume.height());
    for (int v = 0; v < volume.height(); ++v) {
        for (int u = 0; u < volume.width(); ++u) {
            const auto costs = volume.pixel(u, v);
            int best = -1;
            for (int i = 0; i < static_cast<int>(costs.size()); ++i) {
                if (CostVolume::is_marker(costs[i])) {
                    continue;
                }
                if (best < 0 || costs[i] < costs[best]) {
                    best = i;
                }
            }
            if (best >= 0) {
                map.set(u, v, static_cast<float>(volume.d_min() + best));
            }
        }
    }
    return map;
}

std::optional<double> subpixel_offset(double prev, double mid, double next) noexcept {
    const double denom = 2.0 * prev + 2.0 * next - 4.0 * mid;
    if (!(denom > 0.0)) {
        return std::nullopt;
    }
    return (prev - next) / denom;
}

DisparityMap subpixel_refine(const CostVolume& volume, const DisparityMap& integer_map) {
    if (integer_map.width() != volume.width() || integer_map.height() != volume.height()) {
        throw ArgumentError("disparity map and cost volume differ in size");
    }
    DisparityMap out = integer_map;
    for (int v = 0; v < volume.height(); ++v) {
        for (int u = 0; u < volume.width(); ++u) {
            if (!integer_map.valid(u, v)) {
                continue;
            }
            const int d = static_cast<int>(std::lround(integer_map.value(u, v)));
            if (d <= volume.d_min() || d >= volume.d_max()) {
                continue;
            }
            if (!volume.in_bounds(u, v, d - 1) || !volume.in_bounds(u, v, d + 1) ||
                !volume.in_bounds(u, v, d)) {
                continue;
            }
            if (const auto offset =
                    subpixel_offset(volume.at(u, v, d - 1), volume.at(u, v, d), volume.at(u, v, d + 1))) {
                out.set(u, v, static_cast<float>(d + *offset));
            }
        }
    }
    return out;
}

int BmParams::radius_from_block_size(int block_size) {
    if (block_size < 1 || block_size % 2 == 0) {
        throw ArgumentError("block size must be a positive odd number, got " + std::to_string(block_size));
    }
    return block_size / 2;
}

CostVolume bm_cost_volume(const MultiscopicSet& set, const BmParams& params) {
    set.validate();
    const MultiscopicSet gray = set.grayscale();
    std::vector<CostVolume> volumes;
    volumes.reserve(gray.surround().size());
    for (const auto& [dir, image] : gray.surround()) {
        volumes.push_back(sad_volume(gray.center(), image, dir, params.radius, params.d_min, params.d_max));
    }
    if (volumes.size() == 1) {
        return std::move(volumes.front());
    }
    return fuse(volumes, params.fusion, params.heuristic_ratio);
}

DisparityMap match_bm(const MultiscopicSet& set, const BmParams& params) {
    const CostVolume volume = bm_cost_volume(set, params);
    DisparityMap integer_map = wta(volume);
    if (!params.subpixel) {
        return integer_map;
    }
    return subpixel_refine(volume, integer_map);
}

} // namespace multiscopic
