// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "multiscopic/image.hpp"

namespace multiscopic {

/// Reads PGM (P2/P5) or PPM (P3/P6). Samples with maxval other than 255 are
/// rescaled with floor(v * 255 / maxval).
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes P5 for one channel, P6 for three.
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

/// ".pfm" paths get a little-endian grayscale PFM (invalid cells as +inf).
/// Anything else gets an 8-bit PGM holding round(d * scale) clamped to
/// [0, 255], with invalid cells written as 0.
void save_disparity(const DisparityMap& map, const std::filesystem::path& path, double scale);

/// Inverse of save_disparity. For 8-bit inputs a stored 0 means unknown,
/// which is the Middlebury ground-truth convention.
DisparityMap load_disparity(const std::filesystem::path& path, double scale);

/// ITU-R 601 luma, rounded to nearest. One-channel input is returned as is.
ImageBuffer to_grayscale(const ImageBuffer& image);

struct Ratio {
    int num = 1;
    int den = 1;
};

/// Bilinear resampling with half-pixel centred mapping. Output dimensions
/// must come out integral.
ImageBuffer resize_bilinear(const ImageBuffer& image, Ratio factor);

} // namespace multiscopic
