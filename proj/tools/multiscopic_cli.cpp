// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Uses the C API only.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multiscopic/multiscopic.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure {
    std::string message;
};

struct UsageFailure {
    std::string message;
};

void check(ms_status status, const std::string& what) {
    if (status != MS_OK) {
        throw RuntimeFailure{what + ": " + ms_last_error()};
    }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const noexcept { Free(p); }
};
using Image = std::unique_ptr<ms_image, Deleter<ms_image, ms_image_free>>;
using Disparity = std::unique_ptr<ms_disparity, Deleter<ms_disparity, ms_disparity_free>>;
using Set = std::unique_ptr<ms_set, Deleter<ms_set, ms_set_free>>;
using Scene = std::unique_ptr<ms_scene, Deleter<ms_scene, ms_scene_free>>;
using Render = std::unique_ptr<ms_render, Deleter<ms_render, ms_render_free>>;

Image load_image(const std::string& path) {
    ms_image* raw = nullptr;
    check(ms_image_load(path.c_str(), &raw), "cannot load " + path);
    return Image(raw);
}

Disparity load_disparity(const std::string& path, double scale) {
    ms_disparity* raw = nullptr;
    check(ms_disparity_load(path.c_str(), scale, &raw), "cannot load " + path);
    return Disparity(raw);
}

const std::map<std::string, ms_fusion> kFusionNames{
    {"mean", MS_FUSION_MEAN}, {"min", MS_FUSION_MIN}, {"heuristic", MS_FUSION_HEURISTIC}};

const char* fusion_name(ms_fusion f) {
    for (const auto& [name, value] : kFusionNames) {
        if (value == f) {
            return name.c_str();
        }
    }
    return "?";
}

struct ViewArgs {
    std::string center;
    std::string left;
    std::string right;
    std::string top;
    std::string bottom;
    std::string middlebury_dir;
    double rectify_tolerance = 1.0;
};

struct MatchArgs {
    std::string method = "gc";
    ms_bm_params bm = ms_bm_params_default();
    ms_gc_params gc = ms_gc_params_default();
    ms_fusion fusion = MS_FUSION_HEURISTIC;
    int d_min = 1;
    int d_max = 60;
    bool no_subpixel = false;
    bool bt_literal = false;
    std::string out = "disparity.pfm";
    double scale = 1.0;
    std::string preview;
};

void add_view_options(CLI::App* app, ViewArgs& v) {
    app->add_option("--center", v.center, "Centre reference image (PGM/PPM)");
    app->add_option("--left", v.left, "Image from the camera left of the centre");
    app->add_option("--right", v.right, "Image from the camera right of the centre");
    app->add_option("--top", v.top, "Image from the camera above the centre");
    app->add_option("--bottom", v.bottom, "Image from the camera below the centre");
    app->add_option("--middlebury-dir", v.middlebury_dir,
                    "Directory with view0/view1/view2 as PGM or PPM (view1 is the centre)");
    app->add_option("--rectify-tolerance", v.rectify_tolerance,
                    "Warn when a view deviates from its axis by more pixels than this")
        ->capture_default_str();
}

void add_match_options(CLI::App* app, MatchArgs& m) {
    app->add_option("--method", m.method, "bm (block matching) or gc (graph cuts)")
        ->check(CLI::IsMember({"bm", "gc"}))
        ->capture_default_str();
    app->add_option("--dmin", m.d_min, "Minimum disparity")->capture_default_str();
    app->add_option("--dmax", m.d_max, "Maximum disparity")->capture_default_str();
    app->add_option("--fusion", m.fusion, "Cost fusion: mean, min or heuristic")
        ->transform(CLI::CheckedTransformer(kFusionNames, CLI::ignore_case))
        ->default_str("heuristic");
    app->add_option("--block-size", m.bm.block_size, "BM block side (odd)")->capture_default_str();
    app->add_option("--heuristic-ratio", m.bm.heuristic_ratio, "Outlier ratio of the heuristic fusion")
        ->capture_default_str();
    app->add_flag("--no-subpixel", m.no_subpixel, "BM: keep integer disparities");
    app->add_option("--K", m.gc.occlusion_penalty, "GC occlusion penalty")->capture_default_str();
    app->add_option("--lambda1", m.gc.lambda1, "GC smoothness penalty for similar neighbours")
        ->capture_default_str();
    app->add_option("--lambda2", m.gc.lambda2, "GC smoothness penalty for dissimilar neighbours")
        ->capture_default_str();
    app->add_option("--theta", m.gc.theta, "GC intensity similarity threshold")->capture_default_str();
    app->add_option("--dcutoff", m.gc.d_cutoff, "GC disparity difference truncation")->capture_default_str();
    app->add_option("--upscale", m.gc.upscale, "GC image and disparity upscaling factor")
        ->capture_default_str();
    app->add_option("--sweeps", m.gc.max_sweeps, "GC maximum label sweeps")->capture_default_str();
    app->add_option("--seed", m.gc.seed, "GC label order seed")->capture_default_str();
    app->add_option("--energy-scale", m.gc.energy_scale, "GC integer energy scale")->capture_default_str();
    app->add_flag("--bt-literal", m.bt_literal, "GC: pixel dissimilarity in the literal min/max orientation");
}

void finish_params(MatchArgs& m) {
    m.bm.d_min = m.gc.d_min = m.d_min;
    m.bm.d_max = m.gc.d_max = m.d_max;
    m.bm.fusion = m.gc.fusion = m.fusion;
    m.gc.heuristic_ratio = m.bm.heuristic_ratio;
    m.bm.subpixel = m.no_subpixel ? 0 : 1;
    m.gc.bt_literal = m.bt_literal ? 1 : 0;
}

std::string find_view(const fs::path& dir, const std::string& stem) {
    for (const char* ext : {".pgm", ".ppm", ".pnm"}) {
        const fs::path p = dir / (stem + ext);
        if (fs::exists(p)) {
            return p.string();
        }
    }
    throw RuntimeFailure{"no " + stem + ".pgm or " + stem + ".ppm in " + dir.string()};
}

Set build_set(ViewArgs v) {
    if (!v.middlebury_dir.empty()) {
        if (!v.center.empty() || !v.left.empty() || !v.right.empty() || !v.top.empty() || !v.bottom.empty()) {
            throw UsageFailure{"--middlebury-dir cannot be combined with explicit view images"};
        }
        const fs::path dir = v.middlebury_dir;
        v.left = find_view(dir, "view0");
        v.center = find_view(dir, "view1");
        v.right = find_view(dir, "view2");
    }
    if (v.center.empty()) {
        throw UsageFailure{"a centre image is required (--center or --middlebury-dir)"};
    }
    if (v.left.empty() && v.right.empty() && v.top.empty() && v.bottom.empty()) {
        throw UsageFailure{"at least one surrounding image is required (--left/--right/--top/--bottom)"};
    }
    Image center = load_image(v.center);
    ms_set* raw = nullptr;
    check(ms_set_create(center.get(), &raw), "cannot create image set");
    Set set(raw);
    const std::pair<ms_view, const std::string*> views[] = {
        {MS_VIEW_LEFT, &v.left}, {MS_VIEW_RIGHT, &v.right}, {MS_VIEW_TOP, &v.top}, {MS_VIEW_BOTTOM, &v.bottom}};
    for (const auto& [view, path] : views) {
        if (path->empty()) {
            continue;
        }
        Image image = load_image(*path);
        check(ms_set_add_view(set.get(), view, image.get()), "cannot add " + *path);
    }
    int aligned = 1;
    check(ms_set_rectify_check(set.get(), v.rectify_tolerance, &aligned), "alignment check failed");
    if (!aligned) {
        std::cerr << "warning: a surrounding view looks misaligned by more than " << v.rectify_tolerance
                  << " px; results may degrade\n";
    }
    return set;
}

void echo_params(const MatchArgs& m, int views) {
    std::cout << "method=" << m.method << "\n"
              << "views=" << views << "\n"
              << "dmin=" << m.d_min << "\n"
              << "dmax=" << m.d_max << "\n"
              << "fusion=" << fusion_name(m.fusion) << "\n";
    if (m.method == "bm") {
        std::cout << "block_size=" << m.bm.block_size << "\n"
                  << "subpixel=" << m.bm.subpixel << "\n";
    } else {
        std::cout << "K=" << m.gc.occlusion_penalty << "\n"
                  << "lambda1=" << m.gc.lambda1 << "\n"
                  << "lambda2=" << m.gc.lambda2 << "\n"
                  << "theta=" << m.gc.theta << "\n"
                  << "dcutoff=" << m.gc.d_cutoff << "\n"
                  << "upscale=" << m.gc.upscale << "\n"
                  << "sweeps=" << m.gc.max_sweeps << "\n"
                  << "seed=" << m.gc.seed << "\n"
                  << "bt_literal=" << m.gc.bt_literal << "\n";
    }
}

int run_match(const ViewArgs& v, MatchArgs& m) {
    finish_params(m);
    Set set = build_set(v);
    echo_params(m, ms_set_view_count(set.get()));
    ms_disparity* raw = nullptr;
    if (m.method == "bm") {
        check(ms_match_bm(set.get(), &m.bm, &raw), "block matching failed");
    } else {
        ms_gc_stats stats{};
        check(ms_match_gc(set.get(), &m.gc, &raw, &stats), "graph cuts failed");
        std::cout << "gc_sweeps=" << stats.sweeps << "\n"
                  << "gc_moves=" << stats.moves << "\n"
                  << "gc_final_energy=" << stats.final_energy << "\n";
    }
    Disparity map(raw);
    check(ms_disparity_save(map.get(), m.out.c_str(), m.scale), "cannot write " + m.out);
    std::cout << "output=" << m.out << "\n";
    if (!m.preview.empty()) {
        ms_image* preview = nullptr;
        check(ms_disparity_colorize(map.get(), m.d_max, &preview), "cannot colorize");
        Image owned(preview);
        check(ms_image_save(owned.get(), m.preview.c_str()), "cannot write " + m.preview);
        std::cout << "preview=" << m.preview << "\n";
    }
    return kExitOk;
}

int run_fuse_dump(const ViewArgs& v, MatchArgs& m) {
    finish_params(m);
    Set set = build_set(v);
    if (m.method == "bm") {
        check(ms_bm_dump_volume(set.get(), &m.bm, m.out.c_str()), "cannot dump volume");
    } else {
        check(ms_gc_dump_volume(set.get(), &m.gc, m.out.c_str()), "cannot dump volume");
    }
    std::cout << "output=" << m.out << "\n";
    return kExitOk;
}

struct SynthArgs {
    std::string scene;
    std::string views = "lrtb";
    std::optional<std::uint32_t> seed;
    int baseline_units = 1;
    std::string out_dir = ".";
};

int run_synth(const SynthArgs& s) {
    std::vector<ms_view> views;
    for (const char c : s.views) {
        ms_view v{};
        switch (c) {
        case 'l': v = MS_VIEW_LEFT; break;
        case 'r': v = MS_VIEW_RIGHT; break;
        case 't': v = MS_VIEW_TOP; break;
        case 'b': v = MS_VIEW_BOTTOM; break;
        default: throw UsageFailure{std::string("unknown view letter '") + c + "' (use l, r, t, b)"};
        }
        if (std::find(views.begin(), views.end(), v) != views.end()) {
            throw UsageFailure{std::string("view letter '") + c + "' given twice"};
        }
        views.push_back(v);
    }
    ms_scene* raw_scene = nullptr;
    if (s.scene.empty()) {
        check(ms_scene_default(&raw_scene), "cannot build default scene");
    } else {
        check(ms_scene_load(s.scene.c_str(), &raw_scene), "cannot load scene " + s.scene);
    }
    Scene scene(raw_scene);
    if (s.seed) {
        check(ms_scene_reseed(scene.get(), *s.seed), "cannot reseed scene");
    }
    ms_render* raw_render = nullptr;
    check(ms_scene_render(scene.get(), views.data(), static_cast<int>(views.size()), s.baseline_units,
                          &raw_render),
          "cannot render scene");
    Render render(raw_render);

    const fs::path dir = s.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto save = [&](const ms_image* image, const char* name) {
        const std::string path = (dir / name).string();
        check(ms_image_save(image, path.c_str()), "cannot write " + path);
        std::cout << "wrote " << path << "\n";
    };
    save(ms_render_center(render.get()), "center.pgm");
    const std::pair<ms_view, const char*> names[] = {{MS_VIEW_LEFT, "left.pgm"},
                                                     {MS_VIEW_RIGHT, "right.pgm"},
                                                     {MS_VIEW_TOP, "top.pgm"},
                                                     {MS_VIEW_BOTTOM, "bottom.pgm"}};
    for (const auto& [view, name] : names) {
        if (const ms_image* image = ms_render_view(render.get(), view)) {
            save(image, name);
        }
    }
    const std::string gt = (dir / "gt.pfm").string();
    check(ms_disparity_save(ms_render_ground_truth(render.get()), gt.c_str(), 1.0), "cannot write " + gt);
    std::cout << "wrote " << gt << "\n";
    save(ms_render_occlusion(render.get()), "mask.pgm");
    return kExitOk;
}

struct EvalArgs {
    std::string estimate;
    std::string ground_truth;
    std::string baseline;
    double scale = 1.0;
    double est_scale = 1.0;
};

std::string format_report(const ms_report& r, bool key_values) {
    const size_t n = ms_report_format(&r, key_values ? 1 : 0, nullptr, 0);
    std::string out(n + 1, '\0');
    ms_report_format(&r, key_values ? 1 : 0, out.data(), out.size());
    out.resize(n);
    return out;
}

int run_eval(const EvalArgs& e) {
    Disparity gt = load_disparity(e.ground_truth, e.scale);
    Disparity est = load_disparity(e.estimate, e.est_scale);
    ms_report report{};
    check(ms_evaluate(est.get(), gt.get(), &report), "evaluation failed");
    std::cout << format_report(report, false) << format_report(report, true);
    if (!e.baseline.empty()) {
        Disparity base = load_disparity(e.baseline, e.est_scale);
        ms_report base_report{};
        check(ms_evaluate(base.get(), gt.get(), &base_report), "baseline evaluation failed");
        const size_t n = ms_improvement_format(&base_report, &report, nullptr, 0);
        std::string text(n + 1, '\0');
        ms_improvement_format(&base_report, &report, text.data(), text.size());
        text.resize(n);
        std::cout << "baseline " << e.baseline << "\n" << text;
    }
    return kExitOk;
}

// Turns `key = value` lines of a --config file into `--key=value` arguments
// placed before the command-line ones, so explicit flags take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty() || args.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw UsageFailure{"cannot read config file " + path};
    }
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::vector<std::string> extra;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageFailure{path + ":" + std::to_string(number) + ": expected key = value"};
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) != 0) {
            key = "--" + key;
        }
        extra.push_back(key + "=" + value);
    }
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscopic disparity estimation: block matching and graph cuts over a centre image "
                 "and up to four surrounding views."};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ms_version()));

    std::string config_path;
    ViewArgs views;
    MatchArgs match;
    auto* match_cmd = app.add_subcommand("match", "Estimate a disparity map for the centre image");
    add_view_options(match_cmd, views);
    add_match_options(match_cmd, match);
    match_cmd->add_option("--out", match.out, "Output disparity (.pfm floats, else 8-bit PGM)")
        ->capture_default_str();
    match_cmd->add_option("--scale", match.scale, "PGM output: stored value = disparity * scale")
        ->capture_default_str();
    match_cmd->add_option("--preview", match.preview, "Optional Jet-coloured PPM preview");
    match_cmd->add_option("--config", config_path, "File of key = value lines mirroring the flags");

    ViewArgs dump_views;
    MatchArgs dump;
    dump.out = "volume.mscv";
    auto* dump_cmd = app.add_subcommand("fuse-dump", "Write the fused matching-cost volume for debugging");
    add_view_options(dump_cmd, dump_views);
    add_match_options(dump_cmd, dump);
    dump_cmd->add_option("--out", dump.out, "Output volume file")->capture_default_str();
    dump_cmd->add_option("--config", config_path, "File of key = value lines mirroring the flags");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic multiscopic set with ground truth");
    synth_cmd->add_option("--scene", synth.scene, "Scene description file (default: built-in two-layer scene)");
    synth_cmd->add_option("--views", synth.views, "Surrounding views to render, letters from lrtb")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Reseed every noise texture");
    synth_cmd->add_option("--baseline-units", synth.baseline_units, "Baseline multiplier")
        ->capture_default_str();
    synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->capture_default_str();
    synth_cmd->add_option("--config", config_path, "File of key = value lines mirroring the flags");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Compare an estimate with ground truth");
    eval_cmd->add_option("--est", eval.estimate, "Estimated disparity (.pfm or PGM)")->required();
    eval_cmd->add_option("--gt", eval.ground_truth, "Ground-truth disparity (.pfm or PGM, 0 = unknown)")
        ->required();
    eval_cmd->add_option("--scale", eval.scale, "Ground-truth PGM: disparity = value / scale")
        ->capture_default_str();
    eval_cmd->add_option("--est-scale", eval.est_scale, "Estimate PGM: disparity = value / scale")
        ->capture_default_str();
    eval_cmd->add_option("--baseline", eval.baseline, "Second estimate to report improvements against");
    eval_cmd->add_option("--config", config_path, "File of key = value lines mirroring the flags");

    try {
        std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    }

    try {
        if (match_cmd->parsed()) {
            return run_match(views, match);
        }
        if (dump_cmd->parsed()) {
            return run_fuse_dump(dump_views, dump);
        }
        if (synth_cmd->parsed()) {
            return run_synth(synth);
        }
        return run_eval(eval);
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
