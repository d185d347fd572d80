// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/graphcut.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "multiscopic/error.hpp"
#include "multiscopic/imgio.hpp"
#include "multiscopic/maxflow.hpp"

namespace multiscopic {

void GcParams::validate() const {
    if (!(occlusion_penalty > 0.0)) {
        throw ArgumentError("occlusion penalty K must be positive");
    }
    if (!(lambda2 >= 0.0) || !(lambda1 >= lambda2)) {
        throw ArgumentError("smoothness penalties need lambda1 >= lambda2 >= 0");
    }
    if (!(theta >= 0.0)) {
        throw ArgumentError("theta must be non-negative");
    }
    if (d_cutoff < 1) {
        throw ArgumentError("d_cutoff must be at least 1");
    }
    if (d_min < 0 || d_max < d_min) {
        throw ArgumentError("disparity range must satisfy 0 <= d_min <= d_max");
    }
    if (upscale < 1) {
        throw ArgumentError("upscale factor must be at least 1");
    }
    if (max_sweeps < 1) {
        throw ArgumentError("max sweeps must be at least 1");
    }
    if (!(heuristic_ratio > 0.0)) {
        throw ArgumentError("heuristic ratio must be positive");
    }
    if (energy_scale < 1) {
        throw ArgumentError("energy scale must be at least 1");
    }
}

Labeling::Labeling(int width, int height, int fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ArgumentError("labeling needs positive dimensions");
    }
    labels_.assign(static_cast<std::size_t>(width) * height, fill);
}

EnergyModel::EnergyModel(int width, int height, int d_min, int d_max, Energy occlusion_penalty,
                         int d_cutoff)
    : width_(width), height_(height), d_min_(d_min), d_max_(d_max),
      occlusion_penalty_(occlusion_penalty), d_cutoff_(d_cutoff) {
    if (width < 1 || height < 1) {
        throw ArgumentError("energy model needs positive dimensions");
    }
    if (d_max < d_min) {
        throw ArgumentError("energy model needs d_min <= d_max");
    }
    if (occlusion_penalty < 0 || d_cutoff < 1) {
        throw ArgumentError("energy model needs K >= 0 and cutoff >= 1");
    }
    const auto pixels = static_cast<std::size_t>(width) * height;
    data_.assign(pixels * static_cast<std::size_t>(d_max - d_min + 1), -1);
    right_.assign(pixels, 0);
    down_.assign(pixels, 0);
}

void EnergyModel::set_data(int x, int y, int d, Energy cost) {
    if (cost < 0 || cost > std::numeric_limits<std::int32_t>::max()) {
        throw ArgumentError("data cost out of range");
    }
    data_[data_index(x, y, d)] = static_cast<std::int32_t>(cost);
}

void EnergyModel::set_right_weight(int x, int y, Energy weight) {
    if (weight < 0) {
        throw ArgumentError("smoothness weight must be non-negative");
    }
    right_[pixel_index(x, y)] = weight;
}

void EnergyModel::set_down_weight(int x, int y, Energy weight) {
    if (weight < 0) {
        throw ArgumentError("smoothness weight must be non-negative");
    }
    down_[pixel_index(x, y)] = weight;
}

Energy EnergyModel::pair(Energy weight, int a, int b) const noexcept {
    if (a == kOccluded || b == kOccluded) {
        return 0;
    }
    return weight * std::min(std::abs(a - b), d_cutoff_);
}

Energy EnergyModel::energy(const Labeling& labeling) const {
    if (labeling.width() != width_ || labeling.height() != height_) {
        throw ArgumentError("labeling dimensions do not match the energy model");
    }
    Energy total = 0;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const int label = labeling.at(x, y);
            if (label != kOccluded) {
                if (label < d_min_ || label > d_max_) {
                    throw ArgumentError("label " + std::to_string(label) + " outside the disparity range");
                }
                if (!allows(x, y, label)) {
                    throw ArgumentError("label " + std::to_string(label) + " has no data cost at (" +
                                        std::to_string(x) + ", " + std::to_string(y) + ")");
                }
            }
            total += unary(x, y, label);
            if (x + 1 < width_) {
                total += pair(right_weight(x, y), label, labeling.at(x + 1, y));
            }
            if (y + 1 < height_) {
                total += pair(down_weight(x, y), label, labeling.at(x, y + 1));
            }
        }
    }
    return total;
}

CostVolume gc_cost_volume(const MultiscopicSet& set, const GcParams& params) {
    set.validate();
    const MultiscopicSet gray = set.grayscale();
    std::vector<CostVolume> volumes;
    volumes.reserve(gray.surround().size());
    for (const auto& [dir, image] : gray.surround()) {
        volumes.push_back(bt_volume(gray.center(), image, dir, params.d_min, params.d_max, params.bt_variant));
    }
    if (volumes.size() == 1) {
        return std::move(volumes.front());
    }
    return fuse(volumes, params.fusion, params.heuristic_ratio);
}

double pair_lambda(const MultiscopicSet& set, int x1, int y1, int x2, int y2, const GcParams& params) {
    const ImageBuffer& center = set.center();
    const int dc = std::abs(int{center.at(x1, y1)} - int{center.at(x2, y2)});
    if (!(dc < params.theta)) {
        return params.lambda2;
    }
    if (set.surround().empty()) {
        return params.lambda1;
    }
    for (int d = params.d_min; d <= params.d_max; ++d) {
        bool similar = true;
        for (const auto& [dir, image] : set.surround()) {
            const PixelShift s = shift_of(dir);
            const int ax = x1 + s.dx * d;
            const int ay = y1 + s.dy * d;
            const int bx = x2 + s.dx * d;
            const int by = y2 + s.dy * d;
            if (!image.contains(ax, ay) || !image.contains(bx, by)) {
                continue;
            }
            if (!(std::abs(int{image.at(ax, ay)} - int{image.at(bx, by)}) < params.theta)) {
                similar = false;
                break;
            }
        }
        if (similar) {
            return params.lambda1;
        }
    }
    return params.lambda2;
}

namespace {

Energy scaled(double value, int scale) {
    return static_cast<Energy>(std::llround(value * scale));
}

} // namespace

EnergyModel build_energy_model(const MultiscopicSet& set, const GcParams& params) {
    params.validate();
    const MultiscopicSet gray = set.grayscale();
    const int width = gray.center().width();
    const int height = gray.center().height();
    EnergyModel model(width, height, params.d_min, params.d_max,
                      scaled(params.occlusion_penalty, params.energy_scale), params.d_cutoff);
    {
        const CostVolume volume = gc_cost_volume(gray, params);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                for (int d = params.d_min; d <= params.d_max; ++d) {
                    if (volume.in_bounds(x, y, d)) {
                        model.set_data(x, y, d, scaled(volume.at(x, y, d), params.energy_scale));
                    }
                }
            }
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) {
                model.set_right_weight(x, y, scaled(pair_lambda(gray, x, y, x + 1, y, params), params.energy_scale));
            }
            if (y + 1 < height) {
                model.set_down_weight(x, y, scaled(pair_lambda(gray, x, y, x, y + 1, params), params.energy_scale));
            }
        }
    }
    return model;
}

double energy(const MultiscopicSet& set, const Labeling& labeling, const GcParams& params) {
    if (labeling.width() != set.center().width() || labeling.height() != set.center().height()) {
        throw ArgumentError("labeling dimensions do not match the images");
    }
    const EnergyModel model = build_energy_model(set, params);
    return static_cast<double>(model.energy(labeling)) / params.energy_scale;
}

namespace {

constexpr int kFixed = -1;

// Binary variable x = 1 means "ends at alpha". The pair term
// E(x, y) = A + (C-A) x + (D-C) y + (B+C-A-D) (1-x) y is a unary part plus a
// non-negative arc p -> q; source side is x = 0.
struct MoveGraph {
    std::vector<int> node;     // pixel -> variable index or kFixed
    std::vector<int> state0;   // label when x = 0
    std::vector<Energy> e0;
    std::vector<Energy> e1;
    struct Arc {
        int p;
        int q;
        Energy weight;
    };
    std::vector<Arc> arcs;
    Energy constant = 0;
};

} // namespace

Labeling expand(const Labeling& labeling, int alpha, const EnergyModel& model) {
    if (labeling.width() != model.width() || labeling.height() != model.height()) {
        throw ArgumentError("labeling dimensions do not match the energy model");
    }
    if (alpha < model.d_min() || alpha > model.d_max()) {
        throw ArgumentError("alpha " + std::to_string(alpha) + " outside the disparity range");
    }
    const int width = model.width();
    const int height = model.height();
    const auto pixels = static_cast<std::size_t>(width) * height;

    MoveGraph g;
    g.node.assign(pixels, kFixed);
    g.state0.assign(pixels, kOccluded);
    int variables = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const int current = labeling.at(x, y);
            g.state0[i] = current == alpha ? kOccluded : current;
            if (model.allows(x, y, alpha)) {
                g.node[i] = variables++;
                g.e0.push_back(model.unary(x, y, g.state0[i]));
                g.e1.push_back(model.data(x, y, alpha));
            } else {
                g.constant += model.unary(x, y, current);
            }
        }
    }

    const auto add_pair = [&](std::size_t p, std::size_t q, Energy weight) {
        if (weight == 0) {
            return;
        }
        const int np = g.node[p];
        const int nq = g.node[q];
        const int p0 = g.state0[p];
        const int q0 = g.state0[q];
        if (np == kFixed && nq == kFixed) {
            g.constant += model.pair(weight, p0, q0);
        } else if (np == kFixed) {
            g.e0[nq] += model.pair(weight, p0, q0);
            g.e1[nq] += model.pair(weight, p0, alpha);
        } else if (nq == kFixed) {
            g.e0[np] += model.pair(weight, p0, q0);
            g.e1[np] += model.pair(weight, alpha, q0);
        } else {
            const Energy a = model.pair(weight, p0, q0);
            const Energy b = model.pair(weight, p0, alpha);
            const Energy c = model.pair(weight, alpha, q0);
            const Energy d = model.pair(weight, alpha, alpha);
            g.constant += a;
            g.e1[np] += c - a;
            g.e1[nq] += d - c;
            const Energy w = b + c - a - d;
            if (w < 0) {
                throw std::logic_error("expansion pair term is not submodular");
            }
            if (w > 0) {
                g.arcs.push_back({np, nq, w});
            }
        }
    };
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            if (x + 1 < width) {
                add_pair(i, i + 1, model.right_weight(x, y));
            }
            if (y + 1 < height) {
                add_pair(i, i + width, model.down_weight(x, y));
            }
        }
    }

    const int source = variables;
    const int sink = variables + 1;
    FlowGraph graph(variables + 2, source, sink);
    for (int v = 0; v < variables; ++v) {
        const Energy m = std::min(g.e0[v], g.e1[v]);
        g.constant += m;
        if (g.e1[v] > m) {
            graph.add_arc(source, v, g.e1[v] - m);
        }
        if (g.e0[v] > m) {
            graph.add_arc(v, sink, g.e0[v] - m);
        }
    }
    for (const MoveGraph::Arc& arc : g.arcs) {
        graph.add_arc(arc.p, arc.q, arc.weight);
    }
    const MinCut cut = max_flow(graph);

    Labeling result(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const int v = g.node[i];
            if (v == kFixed) {
                result.set(x, y, labeling.at(x, y));
            } else {
                result.set(x, y, cut.source_side[v] ? g.state0[i] : alpha);
            }
        }
    }
    assert(model.energy(result) == g.constant + cut.flow);
    return result;
}

Labeling expand(const Labeling& labeling, int alpha, const MultiscopicSet& set, const GcParams& params) {
    return expand(labeling, alpha, build_energy_model(set, params));
}

namespace {

MultiscopicSet upscaled(const MultiscopicSet& set, int factor) {
    const Ratio ratio{factor, 1};
    MultiscopicSet out(resize_bilinear(set.center(), ratio), set.baseline_mm(), set.focal_px());
    for (const auto& [dir, image] : set.surround()) {
        out.add_view(dir, resize_bilinear(image, ratio));
    }
    return out;
}

} // namespace

GcResult match_gc_detailed(const MultiscopicSet& set, const GcParams& params) {
    params.validate();
    set.validate();
    const int u = params.upscale;
    GcParams work = params;
    work.d_min = params.d_min * u;
    work.d_max = params.d_max * u;
    const MultiscopicSet gray = u > 1 ? upscaled(set.grayscale(), u) : set.grayscale();
    const EnergyModel model = build_energy_model(gray, work);

    GcResult result{DisparityMap(set.center().width(), set.center().height()),
                    Labeling(gray.center().width(), gray.center().height()),
                    {},
                    0,
                    0,
                    0};
    Energy current = model.energy(result.labeling);
    result.energy_trace.push_back(current);

    std::vector<int> labels(static_cast<std::size_t>(work.d_max - work.d_min + 1));
    std::iota(labels.begin(), labels.end(), work.d_min);
    std::mt19937_64 rng(params.seed);
    for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
        std::shuffle(labels.begin(), labels.end(), rng);
        bool improved = false;
        for (const int alpha : labels) {
            Labeling next = expand(result.labeling, alpha, model);
            const Energy e = model.energy(next);
            ++result.moves;
            if (e > current) {
                ++result.energy_violations;
                result.energy_trace.push_back(current);
                continue;
            }
            if (e < current) {
                improved = true;
            }
            result.labeling = std::move(next);
            current = e;
            result.energy_trace.push_back(current);
        }
        ++result.sweeps;
        if (!improved) {
            break;
        }
    }

    for (int y = 0; y < result.disparity.height(); ++y) {
        for (int x = 0; x < result.disparity.width(); ++x) {
            const int label = result.labeling.at(x * u + u / 2, y * u + u / 2);
            if (label != kOccluded) {
                result.disparity.set(x, y, static_cast<float>(label) / static_cast<float>(u));
            }
        }
    }
    return result;
}

DisparityMap match_gc(const MultiscopicSet& set, const GcParams& params) {
    return match_gc_detailed(set, params).disparity;
}

} // namespace multiscopic
