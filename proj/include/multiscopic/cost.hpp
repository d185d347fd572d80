// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "multiscopic/capture.hpp"
#include "multiscopic/image.hpp"

namespace multiscopic {

/// cost(u, v, d) over pixels and an inclusive disparity range. Entries whose
/// matching support leaves an image carry the out-of-bounds marker (NaN)
/// instead of a value; defined entries are non-negative.
class CostVolume {
public:
    /// Every entry starts out of bounds.
    CostVolume(int width, int height, int d_min, int d_max);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int d_min() const noexcept { return d_min_; }
    int d_max() const noexcept { return d_max_; }
    int disparity_count() const noexcept { return d_max_ - d_min_ + 1; }

    bool same_layout(const CostVolume& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && d_min_ == other.d_min_ &&
               d_max_ == other.d_max_;
    }

    bool in_bounds(int u, int v, int d) const noexcept { return !is_marker(at(u, v, d)); }
    float at(int u, int v, int d) const noexcept { return cost_[index(u, v, d)]; }
    void set(int u, int v, int d, float c) noexcept { cost_[index(u, v, d)] = c; }
    void mark_out_of_bounds(int u, int v, int d) noexcept { cost_[index(u, v, d)] = kMarker; }

    /// All disparities of one pixel, d_min first.
    std::span<const float> pixel(int u, int v) const noexcept {
        return {cost_.data() + index(u, v, d_min_), static_cast<std::size_t>(disparity_count())};
    }
    std::span<float> pixel(int u, int v) noexcept {
        return {cost_.data() + index(u, v, d_min_), static_cast<std::size_t>(disparity_count())};
    }

    std::span<const float> raw() const noexcept { return cost_; }
    std::span<float> raw() noexcept { return cost_; }

    static constexpr float kMarker = std::numeric_limits<float>::quiet_NaN();
    static bool is_marker(float c) noexcept { return std::isnan(c); }

private:
    std::size_t index(int u, int v, int d) const noexcept {
        return (static_cast<std::size_t>(v) * width_ + u) * static_cast<std::size_t>(disparity_count()) +
               static_cast<std::size_t>(d - d_min_);
    }

    int width_;
    int height_;
    int d_min_;
    int d_max_;
    std::vector<float> cost_;
};

/// Block sum of absolute differences between `ref` and `other` sampled
/// along `dir` (see shift_of). Block side is 2*radius+1. Entries whose block
/// or shifted block leaves the image are out of bounds.
CostVolume sad_volume(const ImageBuffer& ref, const ImageBuffer& other, ViewDirection dir, int radius,
                      int d_min, int d_max);

enum class BtVariant {
    /// max{0, I_ref - I_max, I_min - I_ref}: zero inside the interval.
    Interval,
    /// max{0, I_ref - I_min, I_max - I_ref}, the min/max orientation as printed.
    Literal,
};

/// Pixelwise Birchfield-Tomasi style dissimilarity. The matched pixel's
/// interval comes from half-way samples towards its 4-neighbours, so
/// slight vertical misalignment is tolerated as well as horizontal.
CostVolume bt_volume(const ImageBuffer& ref, const ImageBuffer& other, ViewDirection dir, int d_min,
                     int d_max, BtVariant variant = BtVariant::Interval);

/// Debug dump: a text line "MSCV <width> <height> <d_min> <d_max>\n" followed
/// by width*height*(d_max-d_min+1) little-endian float32 values in
/// (v, u, d) order, d fastest; out-of-bounds entries are NaN.
void write_volume(const CostVolume& volume, const std::filesystem::path& path);
CostVolume read_volume(const std::filesystem::path& path);

} // namespace multiscopic
