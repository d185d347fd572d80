// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "multiscopic/capture.hpp"
#include "multiscopic/image.hpp"
#include "scratch.hpp"

namespace testing {

inline multiscopic::ImageBuffer noise_image(int w, int h, std::uint32_t seed, int channels = 1) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    multiscopic::ImageBuffer img(w, h, channels);
    for (auto& v : img.data()) {
        v = static_cast<std::uint8_t>(byte(rng));
    }
    return img;
}

/// View in direction `dir` of a fronto-parallel plane at integer disparity
/// d: view(x + dx*d, y + dy*d) = center(x, y); uncovered pixels get noise.
inline multiscopic::ImageBuffer shifted_view(const multiscopic::ImageBuffer& center, multiscopic::ViewDirection dir,
                                             int d, std::uint32_t fill_seed) {
    multiscopic::ImageBuffer view = noise_image(center.width(), center.height(), fill_seed, center.channels());
    const auto s = multiscopic::shift_of(dir);
    for (int y = 0; y < center.height(); ++y) {
        for (int x = 0; x < center.width(); ++x) {
            const int vx = x + s.dx * d;
            const int vy = y + s.dy * d;
            if (view.contains(vx, vy)) {
                for (int c = 0; c < center.channels(); ++c) {
                    view.at(vx, vy, c) = center.at(x, y, c);
                }
            }
        }
    }
    return view;
}

} // namespace testing
