// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/multiscopic.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "multiscopic/blockmatch.hpp"
#include "multiscopic/capture.hpp"
#include "multiscopic/cost.hpp"
#include "multiscopic/error.hpp"
#include "multiscopic/eval.hpp"
#include "multiscopic/graphcut.hpp"
#include "multiscopic/imgio.hpp"

namespace ms = multiscopic;

struct ms_image {
    ms::ImageBuffer image;
};

struct ms_disparity {
    ms::DisparityMap map;
};

struct ms_set {
    ms::MultiscopicSet set;
};

struct ms_scene {
    ms::SyntheticScene scene;
};

struct ms_render {
    ms::RenderedSet rendered;
    ms_set set;
    ms_image center;
    std::vector<std::pair<ms::ViewDirection, ms_image>> views;
    ms_disparity ground_truth;
    ms_image occlusion;
};

namespace {

thread_local std::string last_error;

ms_status fail(ms_status status, const char* message) {
    last_error = message;
    return status;
}

template <typename F>
ms_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return MS_OK;
    } catch (const ms::ArgumentError& e) {
        return fail(MS_ERROR_ARGUMENT, e.what());
    } catch (const ms::FormatError& e) {
        return fail(MS_ERROR_FORMAT, e.what());
    } catch (const ms::IoError& e) {
        return fail(MS_ERROR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MS_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MS_ERROR_INTERNAL, e.what());
    } catch (...) {
        return fail(MS_ERROR_INTERNAL, "unknown failure");
    }
}

void require(bool condition, const char* message) {
    if (!condition) {
        throw ms::ArgumentError(message);
    }
}

ms::ViewDirection to_direction(ms_view view) {
    switch (view) {
    case MS_VIEW_LEFT: return ms::ViewDirection::Left;
    case MS_VIEW_RIGHT: return ms::ViewDirection::Right;
    case MS_VIEW_TOP: return ms::ViewDirection::Top;
    case MS_VIEW_BOTTOM: return ms::ViewDirection::Bottom;
    }
    throw ms::ArgumentError("unknown view direction");
}

ms::FusionRule to_rule(ms_fusion fusion) {
    switch (fusion) {
    case MS_FUSION_MEAN: return ms::FusionRule::Mean;
    case MS_FUSION_MIN: return ms::FusionRule::Min;
    case MS_FUSION_HEURISTIC: return ms::FusionRule::Heuristic;
    }
    throw ms::ArgumentError("unknown fusion rule");
}

ms::BmParams to_bm(const ms_bm_params* p) {
    require(p != nullptr, "null block-matching parameters");
    ms::BmParams out;
    out.radius = ms::BmParams::radius_from_block_size(p->block_size);
    out.d_min = p->d_min;
    out.d_max = p->d_max;
    out.fusion = to_rule(p->fusion);
    out.heuristic_ratio = p->heuristic_ratio;
    out.subpixel = p->subpixel != 0;
    return out;
}

ms::GcParams to_gc(const ms_gc_params* p) {
    require(p != nullptr, "null graph-cut parameters");
    ms::GcParams out;
    out.occlusion_penalty = p->occlusion_penalty;
    out.lambda1 = p->lambda1;
    out.lambda2 = p->lambda2;
    out.theta = p->theta;
    out.d_cutoff = p->d_cutoff;
    out.d_min = p->d_min;
    out.d_max = p->d_max;
    out.upscale = p->upscale;
    out.max_sweeps = p->max_sweeps;
    out.seed = p->seed;
    out.fusion = to_rule(p->fusion);
    out.heuristic_ratio = p->heuristic_ratio;
    out.bt_variant = p->bt_literal ? ms::BtVariant::Literal : ms::BtVariant::Interval;
    out.energy_scale = p->energy_scale;
    out.validate();
    return out;
}

ms::EvalReport from_report(const ms_report& r) {
    ms::EvalReport out;
    out.rms = r.rms;
    out.avg_err = r.avg_err;
    out.bad05 = r.bad05;
    out.bad1 = r.bad1;
    out.bad2 = r.bad2;
    out.evaluated = r.evaluated;
    out.excluded = r.excluded;
    out.invalid_estimates = r.invalid_estimates;
    return out;
}

size_t copy_out(const std::string& text, char* buf, size_t size) {
    if (buf != nullptr && size > 0) {
        const size_t n = std::min(text.size(), size - 1);
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return text.size();
}

} // namespace

extern "C" {

const char* ms_last_error(void) { return last_error.c_str(); }

const char* ms_version(void) { return "0.1.0"; }

ms_status ms_image_load(const char* path, ms_image** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new ms_image{ms::load_image(path)};
    });
}

ms_status ms_image_save(const ms_image* image, const char* path) {
    return guarded([&] {
        require(image != nullptr && path != nullptr, "null argument");
        ms::save_image(image->image, path);
    });
}

ms_status ms_image_create(int width, int height, int channels, const uint8_t* data, ms_image** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        ms::ImageBuffer image(width, height, channels);
        if (data != nullptr) {
            std::copy_n(data, image.data().size(), image.data().begin());
        }
        *out = new ms_image{std::move(image)};
    });
}

int ms_image_width(const ms_image* image) { return image ? image->image.width() : 0; }
int ms_image_height(const ms_image* image) { return image ? image->image.height() : 0; }
int ms_image_channels(const ms_image* image) { return image ? image->image.channels() : 0; }
const uint8_t* ms_image_data(const ms_image* image) { return image ? image->image.data().data() : nullptr; }
void ms_image_free(ms_image* image) { delete image; }

ms_status ms_disparity_load(const char* path, double scale, ms_disparity** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new ms_disparity{ms::load_disparity(path, scale)};
    });
}

ms_status ms_disparity_save(const ms_disparity* map, const char* path, double scale) {
    return guarded([&] {
        require(map != nullptr && path != nullptr, "null argument");
        ms::save_disparity(map->map, path, scale);
    });
}

int ms_disparity_width(const ms_disparity* map) { return map ? map->map.width() : 0; }
int ms_disparity_height(const ms_disparity* map) { return map ? map->map.height() : 0; }

int ms_disparity_get(const ms_disparity* map, int x, int y, float* value) {
    if (map == nullptr || x < 0 || y < 0 || x >= map->map.width() || y >= map->map.height() ||
        !map->map.valid(x, y)) {
        return 0;
    }
    if (value != nullptr) {
        *value = map->map.value(x, y);
    }
    return 1;
}

ms_status ms_disparity_colorize(const ms_disparity* map, double d_max, ms_image** out) {
    return guarded([&] {
        require(map != nullptr && out != nullptr, "null argument");
        *out = new ms_image{ms::colorize(map->map, d_max)};
    });
}

void ms_disparity_free(ms_disparity* map) { delete map; }

ms_status ms_set_create(const ms_image* center, ms_set** out) {
    return guarded([&] {
        require(center != nullptr && out != nullptr, "null argument");
        *out = new ms_set{ms::MultiscopicSet(center->image)};
    });
}

ms_status ms_set_add_view(ms_set* set, ms_view view, const ms_image* image) {
    return guarded([&] {
        require(set != nullptr && image != nullptr, "null argument");
        set->set.add_view(to_direction(view), image->image);
    });
}

int ms_set_view_count(const ms_set* set) {
    return set ? static_cast<int>(set->set.surround().size()) : 0;
}

ms_status ms_set_rectify_check(const ms_set* set, double tolerance, int* aligned) {
    return guarded([&] {
        require(set != nullptr && aligned != nullptr, "null argument");
        *aligned = ms::rectify_check(set->set, tolerance) ? 1 : 0;
    });
}

void ms_set_free(ms_set* set) { delete set; }

ms_bm_params ms_bm_params_default(void) {
    const ms::BmParams d;
    return ms_bm_params{2 * d.radius + 1, d.d_min, d.d_max, MS_FUSION_HEURISTIC, d.heuristic_ratio,
                        d.subpixel ? 1 : 0};
}

ms_status ms_match_bm(const ms_set* set, const ms_bm_params* params, ms_disparity** out) {
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        *out = new ms_disparity{ms::match_bm(set->set, to_bm(params))};
    });
}

ms_status ms_bm_dump_volume(const ms_set* set, const ms_bm_params* params, const char* path) {
    return guarded([&] {
        require(set != nullptr && path != nullptr, "null argument");
        ms::write_volume(ms::bm_cost_volume(set->set, to_bm(params)), path);
    });
}

ms_gc_params ms_gc_params_default(void) {
    const ms::GcParams d;
    return ms_gc_params{d.occlusion_penalty, d.lambda1,    d.lambda2, d.theta,
                        d.d_cutoff,          d.d_min,      d.d_max,   d.upscale,
                        d.max_sweeps,        d.seed,       MS_FUSION_HEURISTIC,
                        d.heuristic_ratio,   0,            d.energy_scale};
}

ms_status ms_match_gc(const ms_set* set, const ms_gc_params* params, ms_disparity** out, ms_gc_stats* stats) {
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        const ms::GcParams p = to_gc(params);
        ms::GcResult result = ms::match_gc_detailed(set->set, p);
        if (stats != nullptr) {
            const double scale = p.energy_scale;
            stats->sweeps = result.sweeps;
            stats->moves = result.moves;
            stats->energy_violations = result.energy_violations;
            stats->initial_energy = static_cast<double>(result.energy_trace.front()) / scale;
            stats->final_energy = static_cast<double>(result.energy_trace.back()) / scale;
        }
        *out = new ms_disparity{std::move(result.disparity)};
    });
}

ms_status ms_gc_dump_volume(const ms_set* set, const ms_gc_params* params, const char* path) {
    return guarded([&] {
        require(set != nullptr && path != nullptr, "null argument");
        ms::write_volume(ms::gc_cost_volume(set->set, to_gc(params)), path);
    });
}

ms_status ms_scene_default(ms_scene** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new ms_scene{ms::SyntheticScene::two_layer_default()};
    });
}

ms_status ms_scene_load(const char* path, ms_scene** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new ms_scene{ms::SyntheticScene::load(path)};
    });
}

ms_status ms_scene_reseed(ms_scene* scene, uint32_t seed) {
    return guarded([&] {
        require(scene != nullptr, "null argument");
        scene->scene.reseed(seed);
    });
}

void ms_scene_free(ms_scene* scene) { delete scene; }

ms_status ms_scene_render(const ms_scene* scene, const ms_view* views, int view_count, int baseline_units,
                          ms_render** out) {
    return guarded([&] {
        require(scene != nullptr && out != nullptr, "null argument");
        require(view_count >= 0 && (view_count == 0 || views != nullptr), "bad view list");
        std::vector<ms::ViewDirection> dirs;
        for (int i = 0; i < view_count; ++i) {
            dirs.push_back(to_direction(views[i]));
        }
        ms::RenderedSet r = ms::render_multiscopic(scene->scene, dirs, baseline_units);
        std::vector<std::pair<ms::ViewDirection, ms_image>> rendered_views;
        for (const auto& [dir, image] : r.set.surround()) {
            rendered_views.emplace_back(dir, ms_image{image});
        }
        *out = new ms_render{r,
                             ms_set{r.set},
                             ms_image{r.set.center()},
                             std::move(rendered_views),
                             ms_disparity{r.ground_truth},
                             ms_image{r.occlusion}};
    });
}

const ms_set* ms_render_set(const ms_render* render) { return render ? &render->set : nullptr; }
const ms_image* ms_render_center(const ms_render* render) { return render ? &render->center : nullptr; }

const ms_image* ms_render_view(const ms_render* render, ms_view view) {
    if (render == nullptr) {
        return nullptr;
    }
    for (const auto& [dir, image] : render->views) {
        if (static_cast<int>(dir) == static_cast<int>(view)) {
            return &image;
        }
    }
    return nullptr;
}

const ms_disparity* ms_render_ground_truth(const ms_render* render) {
    return render ? &render->ground_truth : nullptr;
}
const ms_image* ms_render_occlusion(const ms_render* render) { return render ? &render->occlusion : nullptr; }
void ms_render_free(ms_render* render) { delete render; }

ms_status ms_evaluate(const ms_disparity* estimate, const ms_disparity* ground_truth, ms_report* out) {
    return guarded([&] {
        require(estimate != nullptr && ground_truth != nullptr && out != nullptr, "null argument");
        const ms::EvalReport r = ms::evaluate(estimate->map, ground_truth->map);
        *out = ms_report{r.rms, r.avg_err, r.bad05, r.bad1, r.bad2, r.evaluated, r.excluded, r.invalid_estimates};
    });
}

int ms_improvement(const ms_report* baseline, const ms_report* candidate, int metric, double* value) {
    if (baseline == nullptr || candidate == nullptr) {
        return 0;
    }
    const ms::Improvement imp = ms::improvement(from_report(*baseline), from_report(*candidate));
    std::optional<double> v;
    switch (metric) {
    case 0: v = imp.rms; break;
    case 1: v = imp.avg_err; break;
    case 2: v = imp.bad05; break;
    case 3: v = imp.bad1; break;
    case 4: v = imp.bad2; break;
    default: return 0;
    }
    if (!v) {
        return 0;
    }
    if (value != nullptr) {
        *value = *v;
    }
    return 1;
}

size_t ms_report_format(const ms_report* report, int key_values, char* buf, size_t size) {
    if (report == nullptr) {
        return copy_out({}, buf, size);
    }
    const ms::EvalReport r = from_report(*report);
    return copy_out(key_values ? ms::format_key_values(r) : ms::format_table(r), buf, size);
}

size_t ms_improvement_format(const ms_report* baseline, const ms_report* candidate, char* buf, size_t size) {
    if (baseline == nullptr || candidate == nullptr) {
        return copy_out({}, buf, size);
    }
    return copy_out(ms::format_improvement(from_report(*baseline), from_report(*candidate)), buf, size);
}

} // extern "C"
