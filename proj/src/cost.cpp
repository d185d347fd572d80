// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/cost.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "multiscopic/error.hpp"

namespace multiscopic {

CostVolume::CostVolume(int width, int height, int d_min, int d_max)
    : width_(width), height_(height), d_min_(d_min), d_max_(d_max) {
    if (width < 1 || height < 1) {
        throw ArgumentError("cost volume dimensions must be positive");
    }
    if (d_min < 0 || d_max < d_min) {
        throw ArgumentError("cost volume range must satisfy 0 <= d_min <= d_max");
    }
    cost_.assign(static_cast<std::size_t>(width) * height * disparity_count(), kMarker);
}

namespace {

void check_pair(const ImageBuffer& ref, const ImageBuffer& other) {
    if (ref.width() != other.width() || ref.height() != other.height()) {
        throw ArgumentError("reference and matched images differ in size");
    }
    if (ref.channels() != 1 || other.channels() != 1) {
        throw ArgumentError("cost volumes are built from grayscale images");
    }
}

} // namespace

CostVolume sad_volume(const ImageBuffer& ref, const ImageBuffer& other, ViewDirection dir, int radius,
                      int d_min, int d_max) {
    check_pair(ref, other);
    if (radius < 0 || 2 * radius + 1 > std::min(ref.width(), ref.height())) {
        throw ArgumentError("block does not fit the image");
    }
    const int w = ref.width();
    const int h = ref.height();
    CostVolume volume(w, h, d_min, d_max);
    const PixelShift shift = shift_of(dir);

    // Per disparity: absolute-difference image, then block sums from a
    // summed-area table. Differences outside `other` are never summed
    // because those blocks are marked instead.
    std::vector<std::int64_t> table(static_cast<std::size_t>(w + 1) * (h + 1));
    auto t = [&](int x, int y) -> std::int64_t& { return table[static_cast<std::size_t>(y) * (w + 1) + x]; };
    for (int d = d_min; d <= d_max; ++d) {
        const int ox = shift.dx * d;
        const int oy = shift.dy * d;
        for (int y = 0; y < h; ++y) {
            std::int64_t row = 0;
            for (int x = 0; x < w; ++x) {
                const int sx = x + ox;
                const int sy = y + oy;
                if (sx >= 0 && sx < w && sy >= 0 && sy < h) {
                    row += std::abs(static_cast<int>(other.at(sx, sy)) - static_cast<int>(ref.at(x, y)));
                }
                t(x + 1, y + 1) = t(x + 1, y) + row;
            }
        }
        for (int v = radius; v < h - radius; ++v) {
            const int sy0 = v - radius + oy;
            const int sy1 = v + radius + oy;
            if (sy0 < 0 || sy1 >= h) {
                continue;
            }
            for (int u = radius; u < w - radius; ++u) {
                const int sx0 = u - radius + ox;
                const int sx1 = u + radius + ox;
                if (sx0 < 0 || sx1 >= w) {
                    continue;
                }
                const std::int64_t sum = t(u + radius + 1, v + radius + 1) - t(u - radius, v + radius + 1) -
                                         t(u + radius + 1, v - radius) + t(u - radius, v - radius);
                volume.set(u, v, d, static_cast<float>(sum));
            }
        }
    }
    return volume;
}

CostVolume bt_volume(const ImageBuffer& ref, const ImageBuffer& other, ViewDirection dir, int d_min,
                     int d_max, BtVariant variant) {
    check_pair(ref, other);
    const int w = ref.width();
    const int h = ref.height();

    // Interval of half-way samples around every pixel of `other`.
    std::vector<float> lo(static_cast<std::size_t>(w) * h);
    std::vector<float> hi(lo.size());
    constexpr int kOffsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float c = other.at(x, y);
            float mn = c;
            float mx = c;
            for (const auto& o : kOffsets) {
                const int nx = x + o[0];
                const int ny = y + o[1];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
                    continue;
                }
                const float half = 0.5f * (c + static_cast<float>(other.at(nx, ny)));
                mn = std::min(mn, half);
                mx = std::max(mx, half);
            }
            lo[static_cast<std::size_t>(y) * w + x] = mn;
            hi[static_cast<std::size_t>(y) * w + x] = mx;
        }
    }

    CostVolume volume(w, h, d_min, d_max);
    const PixelShift shift = shift_of(dir);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const float i_ref = ref.at(u, v);
            auto costs = volume.pixel(u, v);
            for (int d = d_min; d <= d_max; ++d) {
                const int qx = u + shift.dx * d;
                const int qy = v + shift.dy * d;
                if (qx < 0 || qx >= w || qy < 0 || qy >= h) {
                    continue;
                }
                const std::size_t q = static_cast<std::size_t>(qy) * w + qx;
                float c = 0.0f;
                if (variant == BtVariant::Interval) {
                    c = std::max({0.0f, i_ref - hi[q], lo[q] - i_ref});
                } else {
                    c = std::max({0.0f, i_ref - lo[q], hi[q] - i_ref});
                }
                costs[d - d_min] = c;
            }
        }
    }
    return volume;
}

void write_volume(const CostVolume& volume, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "MSCV " << volume.width() << ' ' << volume.height() << ' ' << volume.d_min() << ' '
        << volume.d_max() << '\n';
    std::string payload;
    payload.reserve(volume.raw().size() * 4);
    for (float c : volume.raw()) {
        const auto bits = std::bit_cast<std::uint32_t>(c);
        for (int i = 0; i < 4; ++i) {
            payload.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        }
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

CostVolume read_volume(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string header;
    std::getline(in, header);
    std::istringstream fields(header);
    std::string magic;
    int w = 0;
    int h = 0;
    int d0 = 0;
    int d1 = -1;
    if (!(fields >> magic >> w >> h >> d0 >> d1) || magic != "MSCV") {
        throw FormatError("malformed cost volume header in " + path.string());
    }
    CostVolume volume(w, h, d0, d1);
    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (payload.size() < volume.raw().size() * 4) {
        throw IoError("truncated cost volume " + path.string());
    }
    auto raw = volume.raw();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
            bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[4 * i + b])) << (8 * b);
        }
        raw[i] = std::bit_cast<float>(bits);
    }
    return volume;
}

} // namespace multiscopic
