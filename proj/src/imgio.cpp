// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/imgio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

#include "multiscopic/error.hpp"

namespace multiscopic {

namespace {

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed for " + path.string());
    }
    return bytes;
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

bool has_pfm_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pfm";
}

// Netpbm header tokenizer: whitespace separated, '#' comments to end of line.
class HeaderReader {
public:
    HeaderReader(const std::string& bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

    std::string token() {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
               bytes_[pos_] != '#') {
            ++pos_;
        }
        if (start == pos_) {
            throw FormatError("unexpected end of header in " + name_);
        }
        return bytes_.substr(start, pos_ - start);
    }

    long integer(const char* what) {
        const std::string t = token();
        long value = 0;
        for (char c : t) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw FormatError(std::string("malformed ") + what + " '" + t + "' in " + name_);
            }
            value = value * 10 + (c - '0');
            if (value > (1L << 30)) {
                throw FormatError(std::string(what) + " too large in " + name_);
            }
        }
        return value;
    }

    // Binary rasters start after exactly one whitespace byte.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw FormatError("missing whitespace before raster in " + name_);
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
    std::string name_;
    std::size_t pos_ = 0;
};

std::uint8_t rescale(long sample, long maxval) {
    if (maxval == 255) {
        return static_cast<std::uint8_t>(sample);
    }
    return static_cast<std::uint8_t>((sample * 255) / maxval);
}

ImageBuffer decode_pnm(const std::string& bytes, const std::string& name) {
    HeaderReader header(bytes, name);
    const std::string magic = header.token();
    int channels = 0;
    bool binary = false;
    if (magic == "P2") {
        channels = 1;
    } else if (magic == "P5") {
        channels = 1;
        binary = true;
    } else if (magic == "P3") {
        channels = 3;
    } else if (magic == "P6") {
        channels = 3;
        binary = true;
    } else {
        throw FormatError("unsupported magic '" + magic + "' in " + name);
    }
    const long width = header.integer("width");
    const long height = header.integer("height");
    const long maxval = header.integer("maxval");
    if (width < 1 || height < 1) {
        throw FormatError("non-positive dimensions in " + name);
    }
    if (maxval < 1 || maxval > 65535) {
        throw FormatError("maxval out of range in " + name);
    }
    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<std::uint8_t> data(count);

    if (binary) {
        const std::size_t offset = header.raster_offset();
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        if (bytes.size() < offset + count * bytes_per_sample) {
            throw IoError("truncated raster in " + name);
        }
        const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
        for (std::size_t i = 0; i < count; ++i) {
            long sample = bytes_per_sample == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
            if (sample > maxval) {
                throw FormatError("sample exceeds maxval in " + name);
            }
            data[i] = rescale(sample, maxval);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            long sample = 0;
            try {
                sample = header.integer("sample");
            } catch (const FormatError&) {
                throw IoError("truncated or malformed ASCII raster in " + name);
            }
            if (sample > maxval) {
                throw FormatError("sample exceeds maxval in " + name);
            }
            data[i] = rescale(sample, maxval);
        }
    }
    return ImageBuffer(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

void append_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint32_t read_u32(const unsigned char* p, bool little_endian) {
    if (little_endian) {
        return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
               (std::uint32_t{p[3]} << 24);
    }
    return std::uint32_t{p[3]} | (std::uint32_t{p[2]} << 8) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[0]} << 24);
}

DisparityMap decode_pfm(const std::string& bytes, const std::string& name) {
    HeaderReader header(bytes, name);
    const std::string magic = header.token();
    if (magic != "Pf") {
        throw FormatError("expected grayscale PFM ('Pf') in " + name + ", got '" + magic + "'");
    }
    const long width = header.integer("width");
    const long height = header.integer("height");
    const std::string scale_token = header.token();
    double scale = 0.0;
    try {
        std::size_t used = 0;
        scale = std::stod(scale_token, &used);
        if (used != scale_token.size()) {
            throw FormatError("");
        }
    } catch (const std::exception&) {
        throw FormatError("malformed PFM scale '" + scale_token + "' in " + name);
    }
    if (width < 1 || height < 1 || scale == 0.0) {
        throw FormatError("invalid PFM header in " + name);
    }
    const std::size_t offset = header.raster_offset();
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (bytes.size() < offset + count * 4) {
        throw IoError("truncated PFM raster in " + name);
    }
    const bool little = scale < 0.0;
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
    DisparityMap map(static_cast<int>(width), static_cast<int>(height));
    for (long row = 0; row < height; ++row) {
        const int y = static_cast<int>(height - 1 - row); // PFM stores bottom row first
        for (long x = 0; x < width; ++x) {
            const auto bits = read_u32(raw + 4 * (row * width + x), little);
            const float v = std::bit_cast<float>(bits);
            if (std::isfinite(v)) {
                map.set(static_cast<int>(x), y, v);
            }
        }
    }
    return map;
}

} // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
    return decode_pnm(read_all(path), path.string());
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
    std::ostringstream header;
    header << (image.channels() == 1 ? "P5" : "P6") << '\n'
           << image.width() << ' ' << image.height() << "\n255\n";
    std::string out = header.str();
    out.append(reinterpret_cast<const char*>(image.data().data()), image.data().size());
    write_all(path, out);
}

void save_disparity(const DisparityMap& map, const std::filesystem::path& path, double scale) {
    if (!(scale > 0.0)) {
        throw ArgumentError("disparity scale must be positive");
    }
    if (has_pfm_extension(path)) {
        std::ostringstream header;
        header << "Pf\n" << map.width() << ' ' << map.height() << "\n-1.0\n";
        std::string out = header.str();
        out.reserve(out.size() + static_cast<std::size_t>(map.width()) * map.height() * 4);
        for (int y = map.height() - 1; y >= 0; --y) {
            for (int x = 0; x < map.width(); ++x) {
                const float v =
                    map.valid(x, y) ? map.value(x, y) : std::numeric_limits<float>::infinity();
                append_u32_le(out, std::bit_cast<std::uint32_t>(v));
            }
        }
        write_all(path, out);
        return;
    }
    ImageBuffer gray(map.width(), map.height(), 1);
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (!map.valid(x, y)) {
                continue;
            }
            const double scaled = std::round(static_cast<double>(map.value(x, y)) * scale);
            gray.at(x, y) = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
        }
    }
    save_image(gray, path);
}

DisparityMap load_disparity(const std::filesystem::path& path, double scale) {
    if (!(scale > 0.0)) {
        throw ArgumentError("disparity scale must be positive");
    }
    const std::string bytes = read_all(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == 'f' || bytes[1] == 'F')) {
        return decode_pfm(bytes, path.string());
    }
    const ImageBuffer image = to_grayscale(decode_pnm(bytes, path.string()));
    DisparityMap map(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            if (image.at(x, y) != 0) {
                map.set(x, y, static_cast<float>(image.at(x, y) / scale));
            }
        }
    }
    return map;
}

ImageBuffer to_grayscale(const ImageBuffer& image) {
    if (image.channels() == 1) {
        return image;
    }
    ImageBuffer gray(image.width(), image.height(), 1);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const double luma =
                0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) + 0.114 * image.at(x, y, 2);
            gray.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(luma), 0.0, 255.0));
        }
    }
    return gray;
}

ImageBuffer resize_bilinear(const ImageBuffer& image, Ratio factor) {
    if (factor.num <= 0 || factor.den <= 0) {
        throw ArgumentError("resize factor must be positive");
    }
    const long long wn = static_cast<long long>(image.width()) * factor.num;
    const long long hn = static_cast<long long>(image.height()) * factor.num;
    if (wn % factor.den != 0 || hn % factor.den != 0 || wn / factor.den < 1 || hn / factor.den < 1) {
        throw ArgumentError("resize factor " + std::to_string(factor.num) + "/" +
                            std::to_string(factor.den) + " gives non-integral output dimensions");
    }
    const int out_w = static_cast<int>(wn / factor.den);
    const int out_h = static_cast<int>(hn / factor.den);
    if (out_w == image.width() && out_h == image.height()) {
        return image;
    }
    const double inv = static_cast<double>(factor.den) / factor.num;

    struct Tap {
        int i0;
        int i1;
        double w1;
    };
    auto taps = [inv](int out_size, int in_size) {
        std::vector<Tap> result(out_size);
        for (int o = 0; o < out_size; ++o) {
            double src = (o + 0.5) * inv - 0.5;
            src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
            const int i0 = static_cast<int>(std::floor(src));
            const int i1 = std::min(i0 + 1, in_size - 1);
            result[o] = Tap{i0, i1, src - i0};
        }
        return result;
    };
    const auto xs = taps(out_w, image.width());
    const auto ys = taps(out_h, image.height());

    ImageBuffer out(out_w, out_h, image.channels());
    for (int y = 0; y < out_h; ++y) {
        const Tap ty = ys[y];
        for (int x = 0; x < out_w; ++x) {
            const Tap tx = xs[x];
            for (int c = 0; c < image.channels(); ++c) {
                const double top = image.at(tx.i0, ty.i0, c) * (1.0 - tx.w1) + image.at(tx.i1, ty.i0, c) * tx.w1;
                const double bottom = image.at(tx.i0, ty.i1, c) * (1.0 - tx.w1) + image.at(tx.i1, ty.i1, c) * tx.w1;
                const double v = top * (1.0 - ty.w1) + bottom * ty.w1;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
            }
        }
    }
    return out;
}

} // namespace multiscopic
