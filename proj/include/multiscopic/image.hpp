// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace multiscopic {

/// 8-bit image, row-major, channel-interleaved. 1 or 3 channels.
class ImageBuffer {
public:
    ImageBuffer(int width, int height, int channels, std::uint8_t fill = 0);
    ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }

    std::uint8_t at(int x, int y, int c = 0) const noexcept {
        return data_[index(x, y, c)];
    }
    std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool same_shape(const ImageBuffer& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_;
    int height_;
    int channels_;
    std::vector<std::uint8_t> data_;
};

/// Fractional disparities with a per-cell validity mask. Invalid cells are
/// occluded or have no estimate.
class DisparityMap {
public:
    /// All cells start invalid.
    DisparityMap(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool valid(int x, int y) const noexcept { return valid_[index(x, y)] != 0; }
    /// Meaningful only when valid(x, y).
    float value(int x, int y) const noexcept { return values_[index(x, y)]; }

    void set(int x, int y, float d) noexcept {
        values_[index(x, y)] = d;
        valid_[index(x, y)] = 1;
    }
    void invalidate(int x, int y) noexcept {
        values_[index(x, y)] = 0.0f;
        valid_[index(x, y)] = 0;
    }

    std::size_t valid_count() const noexcept;

    std::span<const float> values() const noexcept { return values_; }
    std::span<const std::uint8_t> mask() const noexcept { return valid_; }

    friend bool operator==(const DisparityMap&, const DisparityMap&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<float> values_;
    std::vector<std::uint8_t> valid_;
};

} // namespace multiscopic
