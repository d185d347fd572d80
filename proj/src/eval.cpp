// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "multiscopic/error.hpp"

namespace multiscopic {

namespace {

EvalReport accumulate(const DisparityMap& estimate, const DisparityMap& ground_truth, const ImageBuffer* mask) {
    if (estimate.width() != ground_truth.width() || estimate.height() != ground_truth.height()) {
        throw ArgumentError("estimate and ground truth dimensions differ");
    }
    if (mask != nullptr &&
        (mask->width() != estimate.width() || mask->height() != estimate.height() || mask->channels() != 1)) {
        throw ArgumentError("evaluation mask must be single-channel with the map's dimensions");
    }
    EvalReport report;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t measured = 0;
    std::size_t bad05 = 0;
    std::size_t bad1 = 0;
    std::size_t bad2 = 0;
    for (int y = 0; y < estimate.height(); ++y) {
        for (int x = 0; x < estimate.width(); ++x) {
            if (mask != nullptr && mask->at(x, y) == 0) {
                continue;
            }
            if (!ground_truth.valid(x, y)) {
                ++report.excluded;
                continue;
            }
            ++report.evaluated;
            if (!estimate.valid(x, y)) {
                ++report.invalid_estimates;
                ++bad05;
                ++bad1;
                ++bad2;
                continue;
            }
            const double err = std::abs(static_cast<double>(estimate.value(x, y)) -
                                        static_cast<double>(ground_truth.value(x, y)));
            sum += err;
            sum_sq += err * err;
            ++measured;
            bad05 += err > 0.5 ? 1 : 0;
            bad1 += err > 1.0 ? 1 : 0;
            bad2 += err > 2.0 ? 1 : 0;
        }
    }
    if (measured > 0) {
        report.avg_err = sum / static_cast<double>(measured);
        report.rms = std::sqrt(sum_sq / static_cast<double>(measured));
    }
    if (report.evaluated > 0) {
        const double n = static_cast<double>(report.evaluated);
        report.bad05 = 100.0 * static_cast<double>(bad05) / n;
        report.bad1 = 100.0 * static_cast<double>(bad1) / n;
        report.bad2 = 100.0 * static_cast<double>(bad2) / n;
    }
    return report;
}

std::uint8_t jet_channel(double t, double center) {
    const double v = std::clamp(1.5 - std::abs(4.0 * t - center), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * v));
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

EvalReport evaluate(const DisparityMap& estimate, const DisparityMap& ground_truth) {
    return accumulate(estimate, ground_truth, nullptr);
}

EvalReport evaluate_masked(const DisparityMap& estimate, const DisparityMap& ground_truth,
                           const ImageBuffer& mask) {
    return accumulate(estimate, ground_truth, &mask);
}

std::optional<double> percent_decrease(double baseline, double candidate) noexcept {
    if (baseline == 0.0) {
        return std::nullopt;
    }
    return 100.0 * (baseline - candidate) / baseline;
}

Improvement improvement(const EvalReport& baseline, const EvalReport& candidate) noexcept {
    return Improvement{percent_decrease(baseline.rms, candidate.rms),
                       percent_decrease(baseline.avg_err, candidate.avg_err),
                       percent_decrease(baseline.bad05, candidate.bad05),
                       percent_decrease(baseline.bad1, candidate.bad1),
                       percent_decrease(baseline.bad2, candidate.bad2)};
}

ImageBuffer colorize(const DisparityMap& map, double d_max) {
    if (!(d_max > 0.0)) {
        throw ArgumentError("colorize needs d_max > 0");
    }
    ImageBuffer out(map.width(), map.height(), 3);
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (!map.valid(x, y)) {
                continue;
            }
            const double t = std::clamp(static_cast<double>(map.value(x, y)) / d_max, 0.0, 1.0);
            out.at(x, y, 0) = jet_channel(t, 3.0);
            out.at(x, y, 1) = jet_channel(t, 2.0);
            out.at(x, y, 2) = jet_channel(t, 1.0);
        }
    }
    return out;
}

std::string format_table(const EvalReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%10s %10s %10s %10s %10s %10s %10s\n%10.3f %10.3f %10.2f %10.2f %10.2f %10zu %10zu\n",
                  "RMS", "AvgErr", "Bad0.5", "Bad1", "Bad2", "evaluated", "invalid", report.rms, report.avg_err,
                  report.bad05, report.bad1, report.bad2, report.evaluated, report.invalid_estimates);
    return buf;
}

std::string format_key_values(const EvalReport& report) {
    std::ostringstream out;
    out << "rms=" << fixed(report.rms, 6) << '\n'
        << "avg_err=" << fixed(report.avg_err, 6) << '\n'
        << "bad05=" << fixed(report.bad05, 6) << '\n'
        << "bad1=" << fixed(report.bad1, 6) << '\n'
        << "bad2=" << fixed(report.bad2, 6) << '\n'
        << "evaluated=" << report.evaluated << '\n'
        << "excluded=" << report.excluded << '\n'
        << "invalid_estimates=" << report.invalid_estimates << '\n';
    return out.str();
}

std::string format_improvement(const EvalReport& baseline, const EvalReport& candidate) {
    const Improvement imp = improvement(baseline, candidate);
    std::ostringstream out;
    const auto line = [&](std::string_view name, double a, double b, const std::optional<double>& pct) {
        out << name << ": " << fixed(a, 3) << " -> " << fixed(b, 3);
        if (!pct) {
            out << " (n/a)\n";
        } else if (*pct >= 0.0) {
            out << " (\xE2\x86\x93 " << fixed(*pct, 1) << "%)\n";
        } else {
            out << " (\xE2\x86\x91 " << fixed(-*pct, 1) << "%)\n";
        }
    };
    line("rms", baseline.rms, candidate.rms, imp.rms);
    line("avg_err", baseline.avg_err, candidate.avg_err, imp.avg_err);
    line("bad05", baseline.bad05, candidate.bad05, imp.bad05);
    line("bad1", baseline.bad1, candidate.bad1, imp.bad1);
    line("bad2", baseline.bad2, candidate.bad2, imp.bad2);
    return out.str();
}

} // namespace multiscopic
