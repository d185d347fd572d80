// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "multiscopic/image.hpp"

namespace multiscopic {

/// Displacement of a surrounding camera relative to the centre camera.
enum class ViewDirection { Left, Right, Top, Bottom };

inline constexpr ViewDirection kAllDirections[] = {ViewDirection::Left, ViewDirection::Right,
                                                   ViewDirection::Top, ViewDirection::Bottom};

/// Per-unit-disparity offset at which a surrounding view shows the content
/// of centre pixel (x, y): I_view(x + dx*d, y + dy*d) == I_center(x, y).
struct PixelShift {
    int dx;
    int dy;
};

constexpr PixelShift shift_of(ViewDirection dir) noexcept {
    switch (dir) {
    case ViewDirection::Left: return {1, 0};
    case ViewDirection::Right: return {-1, 0};
    case ViewDirection::Top: return {0, 1};
    case ViewDirection::Bottom: return {0, -1};
    }
    return {0, 0};
}

constexpr bool is_horizontal(ViewDirection dir) noexcept {
    return dir == ViewDirection::Left || dir == ViewDirection::Right;
}

std::string_view to_string(ViewDirection dir) noexcept;
std::optional<ViewDirection> parse_direction(std::string_view name) noexcept;

/// Centre reference image plus up to four axis-aligned views sharing one
/// baseline.
class MultiscopicSet {
public:
    explicit MultiscopicSet(ImageBuffer center, double baseline_mm = 0.0,
                            std::optional<double> focal_px = std::nullopt);

    /// Throws ArgumentError on shape mismatch or a repeated direction.
    void add_view(ViewDirection dir, ImageBuffer image);

    const ImageBuffer& center() const noexcept { return center_; }
    const std::vector<std::pair<ViewDirection, ImageBuffer>>& surround() const noexcept {
        return surround_;
    }
    const ImageBuffer* view(ViewDirection dir) const noexcept;

    double baseline_mm() const noexcept { return baseline_mm_; }
    std::optional<double> focal_px() const noexcept { return focal_px_; }

    /// Throws ArgumentError when no surrounding view is present.
    void validate() const;

    /// Same set with every image converted to one channel.
    MultiscopicSet grayscale() const;

private:
    ImageBuffer center_;
    std::vector<std::pair<ViewDirection, ImageBuffer>> surround_;
    double baseline_mm_;
    std::optional<double> focal_px_;
};

/// Triangulation for parallel optical axes: focal * baseline / depth.
double disparity_from_depth(double depth_m, double baseline_m, double focal_px);

/// Procedural layer texture. Noise is seeded uniform lattice noise smoothed
/// by a 3x3 box filter, defined on the whole plane and sampled bilinearly
/// between lattice points.
struct Texture {
    enum class Kind { Noise, Flat };
    Kind kind = Kind::Noise;
    std::uint32_t seed = 1;
    double value = 128.0;

    double sample(double x, double y) const noexcept;
};

/// Axis-aligned rectangle in centre-view coordinates at one disparity (in
/// pixels per baseline unit). The background covers the whole plane.
struct SceneLayer {
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 0.0;
    double height = 0.0;
    double disparity = 0.0;
    Texture texture;
    bool background = false;

    bool covers(double x, double y) const noexcept {
        return background || (x >= x0 && x < x0 + width && y >= y0 && y < y0 + height);
    }
};

class SyntheticScene {
public:
    SyntheticScene(int width, int height, double d_min, double d_max, std::vector<SceneLayer> layers);

    /// Plain-text description, one `key = value` per line, '#' comments:
    ///   width, height, dmin, dmax
    ///   background = <disparity> noise <seed> | flat <value>
    ///   layer = <x0> <y0> <w> <h> <disparity> noise <seed> | flat <value>
    static SyntheticScene parse(std::istream& in);
    static SyntheticScene load(const std::filesystem::path& path);

    /// 128x128 noise background at disparity 2 with a 40x40 noise square at 10.
    static SyntheticScene two_layer_default();

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double d_min() const noexcept { return d_min_; }
    double d_max() const noexcept { return d_max_; }
    /// Front to back; the last layer is the background.
    const std::vector<SceneLayer>& layers() const noexcept { return layers_; }

    double max_disparity() const noexcept { return layers_.front().disparity; }

    /// Replace every noise seed by a value derived from `seed` and the layer index.
    void reseed(std::uint32_t seed);

    /// Index of the front-most layer covering centre point (x, y).
    std::size_t front_layer(double x, double y) const noexcept;

private:
    void validate() const;

    int width_;
    int height_;
    double d_min_;
    double d_max_;
    std::vector<SceneLayer> layers_;
};

struct RenderedSet {
    MultiscopicSet set;
    /// True centre-view pixel shift: layer disparity * baseline_units.
    DisparityMap ground_truth;
    /// 255 where the centre pixel is invisible in every rendered surrounding view.
    ImageBuffer occlusion;
    /// Per-view masks, same order as the requested directions; 255 = not visible.
    std::vector<std::pair<ViewDirection, ImageBuffer>> occluded_in_view;
};

RenderedSet render_multiscopic(const SyntheticScene& scene, std::span<const ViewDirection> directions,
                               int baseline_units);

/// Offset of `other` relative to `center` perpendicular to the pair's
/// displacement axis, from phase correlation of row (horizontal pairs) or
/// column (vertical pairs) projections.
double estimate_misalignment(const ImageBuffer& center, const ImageBuffer& other, ViewDirection dir);

/// Advisory alignment check: every surrounding view deviates from its
/// expected axis by at most `tolerance` pixels.
bool rectify_check(const MultiscopicSet& set, double tolerance);

} // namespace multiscopic
