// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "multiscopic/multiscopic.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "multiscopic_c_api";
    fs::create_directories(dir);
    return dir / name;
}

struct Rendered {
    ms_scene* scene = nullptr;
    ms_render* render = nullptr;
    Rendered() {
        REQUIRE(ms_scene_default(&scene) == MS_OK);
        const ms_view views[] = {MS_VIEW_LEFT, MS_VIEW_RIGHT, MS_VIEW_TOP, MS_VIEW_BOTTOM};
        REQUIRE(ms_scene_render(scene, views, 4, 1, &render) == MS_OK);
    }
    ~Rendered() {
        ms_render_free(render);
        ms_scene_free(scene);
    }
};

} // namespace

TEST_CASE("status codes and error messages") {
    ms_image* img = nullptr;
    CHECK(ms_image_load("/nonexistent/file.pgm", &img) == MS_ERROR_IO);
    CHECK(std::strlen(ms_last_error()) > 0);
    CHECK(img == nullptr);

    const fs::path bad = scratch("bad.pgm");
    std::ofstream(bad) << "P7 nothing";
    CHECK(ms_image_load(bad.string().c_str(), &img) == MS_ERROR_FORMAT);

    CHECK(ms_image_create(0, 3, 1, nullptr, &img) == MS_ERROR_ARGUMENT);
    CHECK(ms_image_load(nullptr, &img) == MS_ERROR_ARGUMENT);

    REQUIRE(ms_image_create(4, 4, 1, nullptr, &img) == MS_OK);
    CHECK(std::strlen(ms_last_error()) == 0);
    ms_set* set = nullptr;
    REQUIRE(ms_set_create(img, &set) == MS_OK);
    ms_disparity* out = nullptr;
    const ms_bm_params bm = ms_bm_params_default();
    CHECK(ms_match_bm(set, &bm, &out) == MS_ERROR_ARGUMENT); // no surrounding view
    ms_image* other = nullptr;
    REQUIRE(ms_image_create(5, 4, 1, nullptr, &other) == MS_OK);
    CHECK(ms_set_add_view(set, MS_VIEW_LEFT, other) == MS_ERROR_ARGUMENT);
    CHECK(ms_set_view_count(set) == 0);
    ms_image_free(other);
    ms_set_free(set);
    ms_image_free(img);
    ms_image_free(nullptr);
    ms_set_free(nullptr);
}

TEST_CASE("image data round trip") {
    const std::vector<uint8_t> px{1, 2, 3, 4, 5, 6};
    ms_image* img = nullptr;
    REQUIRE(ms_image_create(3, 2, 1, px.data(), &img) == MS_OK);
    CHECK(ms_image_width(img) == 3);
    CHECK(ms_image_height(img) == 2);
    CHECK(ms_image_channels(img) == 1);
    CHECK(std::memcmp(ms_image_data(img), px.data(), px.size()) == 0);
    const fs::path path = scratch("rt.pgm");
    REQUIRE(ms_image_save(img, path.string().c_str()) == MS_OK);
    ms_image* back = nullptr;
    REQUIRE(ms_image_load(path.string().c_str(), &back) == MS_OK);
    CHECK(std::memcmp(ms_image_data(back), px.data(), px.size()) == 0);
    ms_image_free(back);
    ms_image_free(img);
}

TEST_CASE("default parameters") {
    const ms_bm_params bm = ms_bm_params_default();
    CHECK(bm.block_size == 11);
    CHECK(bm.d_min == 1);
    CHECK(bm.d_max == 60);
    CHECK(bm.fusion == MS_FUSION_HEURISTIC);
    const ms_gc_params gc = ms_gc_params_default();
    CHECK(gc.occlusion_penalty == 10.0);
    CHECK(gc.lambda1 == 9.0);
    CHECK(gc.lambda2 == 3.0);
    CHECK(gc.theta == 8.0);
    CHECK(gc.d_cutoff == 5);
    CHECK(gc.upscale == 1);
    CHECK(gc.max_sweeps == 4);
}

TEST_CASE("render, match and evaluate") {
    Rendered r;
    const ms_set* set = ms_render_set(r.render);
    CHECK(ms_set_view_count(set) == 4);
    CHECK(ms_render_view(r.render, MS_VIEW_TOP) != nullptr);
    CHECK(ms_image_width(ms_render_center(r.render)) == 128);
    int aligned = 0;
    REQUIRE(ms_set_rectify_check(set, 1.0, &aligned) == MS_OK);
    CHECK(aligned == 1);

    ms_bm_params bm = ms_bm_params_default();
    bm.d_min = 0;
    bm.d_max = 16;
    ms_disparity* bm_map = nullptr;
    REQUIRE(ms_match_bm(set, &bm, &bm_map) == MS_OK);
    float v = 0.0f;
    REQUIRE(ms_disparity_get(bm_map, 64, 64, &v) == 1);
    CHECK(v == doctest::Approx(10.0f).epsilon(0.01));
    CHECK(ms_disparity_get(bm_map, 0, 0, &v) == 0);

    ms_gc_params gc = ms_gc_params_default();
    gc.d_min = 0;
    gc.d_max = 16;
    ms_gc_stats stats{};
    ms_disparity* gc_map = nullptr;
    REQUIRE(ms_match_gc(set, &gc, &gc_map, &stats) == MS_OK);
    CHECK(stats.sweeps >= 1);
    CHECK(stats.energy_violations == 0);
    CHECK(stats.final_energy <= stats.initial_energy);
    CHECK(stats.initial_energy == doctest::Approx(10.0 * 128 * 128));

    ms_report bm_report{};
    ms_report gc_report{};
    REQUIRE(ms_evaluate(bm_map, ms_render_ground_truth(r.render), &bm_report) == MS_OK);
    REQUIRE(ms_evaluate(gc_map, ms_render_ground_truth(r.render), &gc_report) == MS_OK);
    CHECK(bm_report.evaluated == 128u * 128u);
    CHECK(gc_report.bad1 < bm_report.bad1);

    double pct = 0.0;
    CHECK(ms_improvement(&bm_report, &gc_report, 3, &pct) == 1);
    CHECK(pct > 0.0);
    CHECK(ms_improvement(&bm_report, &gc_report, 9, &pct) == 0);

    char small[8];
    const size_t full = ms_report_format(&gc_report, 1, small, sizeof small);
    CHECK(full > sizeof small);
    CHECK(std::strlen(small) == sizeof small - 1);
    std::string text(full + 1, '\0');
    ms_report_format(&gc_report, 1, text.data(), text.size());
    CHECK(text.find("bad1=") != std::string::npos);
    std::string imp(ms_improvement_format(&bm_report, &gc_report, nullptr, 0) + 1, '\0');
    ms_improvement_format(&bm_report, &gc_report, imp.data(), imp.size());
    CHECK(imp.find("bad1: ") != std::string::npos);

    ms_image* preview = nullptr;
    REQUIRE(ms_disparity_colorize(gc_map, 16.0, &preview) == MS_OK);
    CHECK(ms_image_channels(preview) == 3);
    CHECK(ms_disparity_colorize(gc_map, 0.0, &preview) == MS_ERROR_ARGUMENT);
    ms_image_free(preview);

    const fs::path pfm = scratch("gc.pfm");
    REQUIRE(ms_disparity_save(gc_map, pfm.string().c_str(), 1.0) == MS_OK);
    ms_disparity* loaded = nullptr;
    REQUIRE(ms_disparity_load(pfm.string().c_str(), 1.0, &loaded) == MS_OK);
    ms_report same{};
    REQUIRE(ms_evaluate(loaded, ms_render_ground_truth(r.render), &same) == MS_OK);
    CHECK(same.rms == gc_report.rms);
    ms_disparity_free(loaded);

    const fs::path vol = scratch("bm.mscv");
    REQUIRE(ms_bm_dump_volume(set, &bm, vol.string().c_str()) == MS_OK);
    CHECK(fs::file_size(vol) > 128u * 128u * 17u * 4u);
    REQUIRE(ms_gc_dump_volume(set, &gc, vol.string().c_str()) == MS_OK);

    gc.lambda1 = 1.0; // below lambda2
    CHECK(ms_match_gc(set, &gc, &gc_map, nullptr) == MS_ERROR_ARGUMENT);

    ms_disparity_free(gc_map);
    ms_disparity_free(bm_map);
}

TEST_CASE("scene files and reseeding") {
    const fs::path path = scratch("scene.txt");
    std::ofstream(path) << "width = 32\nheight = 24\nbackground = 1 noise 4\nlayer = 8 8 10 8 5 flat 200\n";
    ms_scene* scene = nullptr;
    REQUIRE(ms_scene_load(path.string().c_str(), &scene) == MS_OK);
    CHECK(ms_scene_reseed(scene, 9) == MS_OK);
    const ms_view lr[] = {MS_VIEW_LEFT, MS_VIEW_RIGHT};
    ms_render* render = nullptr;
    REQUIRE(ms_scene_render(scene, lr, 2, 1, &render) == MS_OK);
    CHECK(ms_render_view(render, MS_VIEW_TOP) == nullptr);
    float d = 0.0f;
    REQUIRE(ms_disparity_get(ms_render_ground_truth(render), 10, 10, &d) == 1);
    CHECK(d == 5.0f);
    CHECK(ms_scene_render(scene, lr, 2, 40, &render) == MS_ERROR_ARGUMENT);
    ms_render_free(render);
    ms_scene_free(scene);

    std::ofstream(path) << "width = 32\nsize = 3\n";
    CHECK(ms_scene_load(path.string().c_str(), &scene) == MS_ERROR_FORMAT);
}
