// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/image.hpp"

#include <algorithm>
#include <string>

#include "multiscopic/error.hpp"

namespace multiscopic {

namespace {

void check_shape(int width, int height, int channels) {
    if (width < 1 || height < 1) {
        throw ArgumentError("image dimensions must be positive, got " + std::to_string(width) +
                            "x" + std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
        throw ArgumentError("image must have 1 or 3 channels, got " + std::to_string(channels));
    }
}

} // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
    check_shape(width, height, channels);
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape(width, height, channels);
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw ArgumentError("image data length does not match " + std::to_string(width) + "x" +
                            std::to_string(height) + "x" + std::to_string(channels));
    }
}

DisparityMap::DisparityMap(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ArgumentError("disparity map dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(width) * height, 0.0f);
    valid_.assign(values_.size(), 0);
}

std::size_t DisparityMap::valid_count() const noexcept {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

} // namespace multiscopic
