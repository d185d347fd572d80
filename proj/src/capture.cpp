// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/capture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "multiscopic/error.hpp"
#include "multiscopic/imgio.hpp"

namespace multiscopic {

std::string_view to_string(ViewDirection dir) noexcept {
    switch (dir) {
    case ViewDirection::Left: return "left";
    case ViewDirection::Right: return "right";
    case ViewDirection::Top: return "top";
    case ViewDirection::Bottom: return "bottom";
    }
    return "?";
}

std::optional<ViewDirection> parse_direction(std::string_view name) noexcept {
    for (ViewDirection dir : kAllDirections) {
        if (to_string(dir) == name || to_string(dir).substr(0, 1) == name) {
            return dir;
        }
    }
    return std::nullopt;
}

MultiscopicSet::MultiscopicSet(ImageBuffer center, double baseline_mm, std::optional<double> focal_px)
    : center_(std::move(center)), baseline_mm_(baseline_mm), focal_px_(focal_px) {}

void MultiscopicSet::add_view(ViewDirection dir, ImageBuffer image) {
    if (!image.same_shape(center_)) {
        throw ArgumentError("view '" + std::string(to_string(dir)) +
                            "' does not match the centre image dimensions/channels");
    }
    if (view(dir) != nullptr) {
        throw ArgumentError("duplicate view direction '" + std::string(to_string(dir)) + "'");
    }
    surround_.emplace_back(dir, std::move(image));
}

const ImageBuffer* MultiscopicSet::view(ViewDirection dir) const noexcept {
    for (const auto& [d, image] : surround_) {
        if (d == dir) {
            return &image;
        }
    }
    return nullptr;
}

void MultiscopicSet::validate() const {
    if (surround_.empty()) {
        throw ArgumentError("multiscopic set needs at least one surrounding view");
    }
}

MultiscopicSet MultiscopicSet::grayscale() const {
    MultiscopicSet out(to_grayscale(center_), baseline_mm_, focal_px_);
    for (const auto& [dir, image] : surround_) {
        out.add_view(dir, to_grayscale(image));
    }
    return out;
}

double disparity_from_depth(double depth_m, double baseline_m, double focal_px) {
    if (!(depth_m > 0.0) || !(baseline_m > 0.0) || !(focal_px > 0.0)) {
        throw ArgumentError("depth, baseline and focal length must be positive");
    }
    return focal_px * baseline_m / depth_m;
}

namespace {

std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double lattice_noise(std::uint32_t seed, long long i, long long j) noexcept {
    const std::uint64_t key = mix(mix(seed) ^ static_cast<std::uint64_t>(i) * 0x100000001B3ULL) ^
                              static_cast<std::uint64_t>(j);
    return static_cast<double>(mix(key) >> 11) * (255.0 / 9007199254740992.0);
}

double smoothed_noise(std::uint32_t seed, long long i, long long j) noexcept {
    double sum = 0.0;
    for (long long dj = -1; dj <= 1; ++dj) {
        for (long long di = -1; di <= 1; ++di) {
            sum += lattice_noise(seed, i + di, j + dj);
        }
    }
    return sum / 9.0;
}

} // namespace

double Texture::sample(double x, double y) const noexcept {
    if (kind == Kind::Flat) {
        return value;
    }
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto i = static_cast<long long>(fx);
    const auto j = static_cast<long long>(fy);
    const double ax = x - fx;
    const double ay = y - fy;
    // Exact lattice hits skip the interpolation so integer shifts reproduce
    // the centre samples bit for bit.
    if (ax == 0.0 && ay == 0.0) {
        return smoothed_noise(seed, i, j);
    }
    const double v00 = smoothed_noise(seed, i, j);
    const double v10 = smoothed_noise(seed, i + 1, j);
    const double v01 = smoothed_noise(seed, i, j + 1);
    const double v11 = smoothed_noise(seed, i + 1, j + 1);
    return (v00 * (1 - ax) + v10 * ax) * (1 - ay) + (v01 * (1 - ax) + v11 * ax) * ay;
}

SyntheticScene::SyntheticScene(int width, int height, double d_min, double d_max,
                               std::vector<SceneLayer> layers)
    : width_(width), height_(height), d_min_(d_min), d_max_(d_max), layers_(std::move(layers)) {
    std::stable_sort(layers_.begin(), layers_.end(),
                     [](const SceneLayer& a, const SceneLayer& b) { return a.disparity > b.disparity; });
    validate();
}

void SyntheticScene::validate() const {
    if (width_ < 1 || height_ < 1) {
        throw ArgumentError("scene dimensions must be positive");
    }
    if (d_min_ < 0 || d_max_ < d_min_) {
        throw ArgumentError("scene disparity range must satisfy 0 <= dmin <= dmax");
    }
    if (layers_.empty() || !layers_.back().background) {
        throw ArgumentError("scene needs a background layer behind every other layer");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const SceneLayer& layer = layers_[i];
        if (layer.background && i + 1 != layers_.size()) {
            throw ArgumentError("scene has more than one background or a layer behind it");
        }
        if (i > 0 && !(layers_[i - 1].disparity > layer.disparity)) {
            throw ArgumentError("layer disparities must be strictly decreasing front to back");
        }
        if (layer.disparity < d_min_ || layer.disparity > d_max_) {
            throw ArgumentError("layer disparity outside the declared [dmin, dmax]");
        }
        if (!layer.background && (layer.width <= 0 || layer.height <= 0)) {
            throw ArgumentError("layer rectangle must have positive extent");
        }
    }
}

std::size_t SyntheticScene::front_layer(double x, double y) const noexcept {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].covers(x, y)) {
            return i;
        }
    }
    return layers_.size() - 1;
}

void SyntheticScene::reseed(std::uint32_t seed) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i].texture.seed = static_cast<std::uint32_t>(mix(seed * 1000003ULL + i));
    }
}

namespace {

Texture parse_texture(std::istringstream& in, const std::string& line) {
    std::string kind;
    Texture texture;
    if (!(in >> kind)) {
        throw FormatError("missing texture in scene line: " + line);
    }
    if (kind == "noise") {
        long long seed = 0;
        if (!(in >> seed) || seed < 0) {
            throw FormatError("noise texture needs a non-negative seed: " + line);
        }
        texture.kind = Texture::Kind::Noise;
        texture.seed = static_cast<std::uint32_t>(seed);
    } else if (kind == "flat") {
        if (!(in >> texture.value) || texture.value < 0 || texture.value > 255) {
            throw FormatError("flat texture needs a value in [0, 255]: " + line);
        }
        texture.kind = Texture::Kind::Flat;
    } else {
        throw FormatError("unknown texture '" + kind + "': " + line);
    }
    return texture;
}

} // namespace

SyntheticScene SyntheticScene::parse(std::istream& in) {
    int width = 0;
    int height = 0;
    double d_min = 0.0;
    double d_max = -1.0;
    std::vector<SceneLayer> layers;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw FormatError("expected 'key = value' in scene line: " + line);
            }
            continue;
        }
        std::istringstream key_stream(line.substr(0, eq));
        std::string key;
        key_stream >> key;
        std::istringstream value(line.substr(eq + 1));
        bool ok = true;
        if (key == "width") {
            ok = static_cast<bool>(value >> width);
        } else if (key == "height") {
            ok = static_cast<bool>(value >> height);
        } else if (key == "dmin") {
            ok = static_cast<bool>(value >> d_min);
        } else if (key == "dmax") {
            ok = static_cast<bool>(value >> d_max);
        } else if (key == "background") {
            SceneLayer layer;
            layer.background = true;
            ok = static_cast<bool>(value >> layer.disparity);
            if (ok) {
                layer.texture = parse_texture(value, line);
            }
            layers.push_back(layer);
        } else if (key == "layer") {
            SceneLayer layer;
            ok = static_cast<bool>(value >> layer.x0 >> layer.y0 >> layer.width >> layer.height >>
                                   layer.disparity);
            if (ok) {
                layer.texture = parse_texture(value, line);
            }
            layers.push_back(layer);
        } else {
            throw FormatError("unknown scene key '" + key + "'");
        }
        if (!ok) {
            throw FormatError("malformed value in scene line: " + line);
        }
    }
    if (d_max < 0.0) {
        for (const auto& layer : layers) {
            d_max = std::max(d_max, layer.disparity);
        }
    }
    return SyntheticScene(width, height, d_min, d_max, std::move(layers));
}

SyntheticScene SyntheticScene::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scene file " + path.string());
    }
    return parse(in);
}

SyntheticScene SyntheticScene::two_layer_default() {
    SceneLayer background;
    background.background = true;
    background.disparity = 2;
    background.texture = Texture{Texture::Kind::Noise, 11, 0.0};
    SceneLayer square;
    square.x0 = 44;
    square.y0 = 44;
    square.width = 40;
    square.height = 40;
    square.disparity = 10;
    square.texture = Texture{Texture::Kind::Noise, 23, 0.0};
    return SyntheticScene(128, 128, 0, 16, {square, background});
}

namespace {

std::uint8_t to_byte(double v) noexcept {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

// Front-most layer seen at view pixel (x, y) when the view is displaced by
// `shift` baseline units.
std::size_t visible_layer(const SyntheticScene& scene, double x, double y, PixelShift shift, int k) noexcept {
    const auto& layers = scene.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const double s = layers[i].disparity * k;
        if (layers[i].covers(x - shift.dx * s, y - shift.dy * s)) {
            return i;
        }
    }
    return layers.size() - 1;
}

ImageBuffer render_view(const SyntheticScene& scene, PixelShift shift, int k) {
    ImageBuffer image(scene.width(), scene.height(), 1);
    const auto& layers = scene.layers();
    for (int y = 0; y < scene.height(); ++y) {
        for (int x = 0; x < scene.width(); ++x) {
            const std::size_t i = visible_layer(scene, x, y, shift, k);
            const double s = layers[i].disparity * k;
            image.at(x, y) = to_byte(layers[i].texture.sample(x - shift.dx * s, y - shift.dy * s));
        }
    }
    return image;
}

} // namespace

RenderedSet render_multiscopic(const SyntheticScene& scene, std::span<const ViewDirection> directions,
                               int baseline_units) {
    if (baseline_units < 1) {
        throw ArgumentError("baseline_units must be a positive integer");
    }
    if (directions.empty()) {
        throw ArgumentError("at least one surrounding view must be requested");
    }
    const double max_shift = scene.max_disparity() * baseline_units;
    bool vertical = false;
    for (ViewDirection dir : directions) {
        vertical = vertical || !is_horizontal(dir);
    }
    if (max_shift >= scene.width() || (vertical && max_shift >= scene.height())) {
        throw ArgumentError("baseline_units * max layer disparity exceeds the image extent");
    }

    MultiscopicSet set(render_view(scene, {0, 0}, baseline_units));
    DisparityMap truth(scene.width(), scene.height());
    for (int y = 0; y < scene.height(); ++y) {
        for (int x = 0; x < scene.width(); ++x) {
            truth.set(x, y, static_cast<float>(scene.layers()[scene.front_layer(x, y)].disparity * baseline_units));
        }
    }

    ImageBuffer occlusion(scene.width(), scene.height(), 1, 255);
    std::vector<std::pair<ViewDirection, ImageBuffer>> per_view;
    for (ViewDirection dir : directions) {
        const PixelShift shift = shift_of(dir);
        set.add_view(dir, render_view(scene, shift, baseline_units));
        ImageBuffer hidden(scene.width(), scene.height(), 1, 0);
        for (int y = 0; y < scene.height(); ++y) {
            for (int x = 0; x < scene.width(); ++x) {
                const std::size_t front = scene.front_layer(x, y);
                const double s = scene.layers()[front].disparity * baseline_units;
                const double vx = x + shift.dx * s;
                const double vy = y + shift.dy * s;
                const bool in_frame = vx >= 0 && vy >= 0 && vx <= scene.width() - 1 && vy <= scene.height() - 1;
                const bool seen = in_frame && visible_layer(scene, vx, vy, shift, baseline_units) == front;
                if (seen) {
                    occlusion.at(x, y) = 0;
                } else {
                    hidden.at(x, y) = 255;
                }
            }
        }
        per_view.emplace_back(dir, std::move(hidden));
    }
    return RenderedSet{std::move(set), std::move(truth), std::move(occlusion), std::move(per_view)};
}

namespace {

std::vector<double> projection(const ImageBuffer& gray, bool rows) {
    const int n = rows ? gray.height() : gray.width();
    const int m = rows ? gray.width() : gray.height();
    std::vector<double> p(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            sum += rows ? gray.at(j, i) : gray.at(i, j);
        }
        p[i] = sum / m;
    }
    const double mean = [&] {
        double s = 0.0;
        for (double v : p) {
            s += v;
        }
        return s / n;
    }();
    for (int i = 0; i < n; ++i) {
        const double hann = n > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1)) : 1.0;
        p[i] = (p[i] - mean) * hann;
    }
    return p;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, bool inverse) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / n;
            acc += in[t] * std::polar(1.0, angle);
        }
        out[k] = acc;
    }
    return out;
}

} // namespace

double estimate_misalignment(const ImageBuffer& center, const ImageBuffer& other, ViewDirection dir) {
    if (center.width() != other.width() || center.height() != other.height()) {
        throw ArgumentError("misalignment estimate needs equally sized images");
    }
    const bool rows = is_horizontal(dir);
    const auto a = projection(to_grayscale(center), rows);
    const auto b = projection(to_grayscale(other), rows);
    const std::size_t n = a.size();
    if (n < 3) {
        return 0.0;
    }
    std::vector<std::complex<double>> fa(n);
    std::vector<std::complex<double>> fb(n);
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] = a[i];
        fb[i] = b[i];
    }
    fa = dft(fa, false);
    fb = dft(fb, false);
    std::vector<std::complex<double>> cross(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto c = std::conj(fa[k]) * fb[k];
        const double mag = std::abs(c);
        cross[k] = mag > 1e-12 ? c / mag : std::complex<double>{};
    }
    const auto corr = dft(cross, true);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (corr[i].real() > corr[peak].real()) {
            peak = i;
        }
    }
    const double left = corr[(peak + n - 1) % n].real();
    const double mid = corr[peak].real();
    const double right = corr[(peak + 1) % n].real();
    const double denom = left - 2.0 * mid + right;
    const double frac = denom < 0.0 ? 0.5 * (left - right) / denom : 0.0;
    double shift = static_cast<double>(peak) + frac;
    if (shift > n / 2.0) {
        shift -= static_cast<double>(n);
    }
    return shift;
}

bool rectify_check(const MultiscopicSet& set, double tolerance) {
    if (tolerance >= std::max(set.center().width(), set.center().height())) {
        return true;
    }
    for (const auto& [dir, image] : set.surround()) {
        if (std::abs(estimate_misalignment(set.center(), image, dir)) > tolerance) {
            return false;
        }
    }
    return true;
}

} // namespace multiscopic
