#pragma once

#include "amfst/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <string>
#include <span>
#include <utility>
#include <vector>

namespace amfst {

/// Accuracy thresholds averaged by delta_avg, in pixels.
inline constexpr std::array<double, 5> kDeltaThresholds{4.0, 8.0, 16.0, 32.0, 64.0};

namespace detail {

inline void check_aligned(std::span<const Point2> pred, std::span<const Point2> gt, std::size_t flags) {
    if (pred.size() != gt.size() || flags != pred.size()) {
        throw InvalidInput("prediction, ground truth and flag lengths differ");
    }
}

}  // namespace detail

/// Mean endpoint error over included pairs.
inline double mee(std::span<const Point2> pred, std::span<const Point2> gt, const std::vector<bool>& include) {
    detail::check_aligned(pred, gt, include.size());
    double      sum   = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (include[i]) {
            sum += distance(pred[i], gt[i]);
            ++count;
        }
    }
    if (count == 0) {
        throw UndefinedMetric("MEE needs at least one included pair");
    }
    return sum / static_cast<double>(count);
}

/// Symmetric chamfer: the average of the two directed mean nearest-neighbour distances.
inline double mcd(std::span<const Point2> pred_set, std::span<const Point2> gt_set) {
    if (pred_set.empty() || gt_set.empty()) {
        throw UndefinedMetric("chamfer distance needs two non-empty sets");
    }
    auto directed = [](std::span<const Point2> from, std::span<const Point2> to) {
        double sum = 0.0;
        for (const Point2& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& b : to) {
                best = std::min(best, distance(a, b));
            }
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };
    return 0.5 * (directed(pred_set, gt_set) + directed(gt_set, pred_set));
}

/// Fraction of included pairs with error strictly below `threshold`.
inline double delta_at(std::span<const Point2> pred, std::span<const Point2> gt, const std::vector<bool>& include,
                       double threshold) {
    detail::check_aligned(pred, gt, include.size());
    std::size_t hits = 0, count = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (include[i]) {
            ++count;
            hits += distance(pred[i], gt[i]) < threshold ? 1 : 0;
        }
    }
    if (count == 0) {
        throw UndefinedMetric("delta needs at least one included pair");
    }
    return static_cast<double>(hits) / static_cast<double>(count);
}

inline double delta_avg(std::span<const Point2> pred, std::span<const Point2> gt, const std::vector<bool>& include,
                        std::span<const double> thresholds = kDeltaThresholds) {
    if (thresholds.empty()) {
        throw InvalidInput("delta_avg needs at least one threshold");
    }
    double sum = 0.0;
    for (double th : thresholds) {
        sum += delta_at(pred, gt, include, th);
    }
    return sum / static_cast<double>(thresholds.size());
}

/// Share of mask-occluded pairs still tracked within 64 px.
inline double delta64_occluded(std::span<const Point2> pred, std::span<const Point2> gt,
                               const std::vector<bool>& occluded_by_mask) {
    detail::check_aligned(pred, gt, occluded_by_mask.size());
    if (std::none_of(occluded_by_mask.begin(), occluded_by_mask.end(), [](bool b) { return b; })) {
        throw UndefinedMetric("no mask-occluded pairs to evaluate");
    }
    return delta_at(pred, gt, occluded_by_mask, 64.0);
}

/// Per-frame sequence of predictions against ground truth.
struct FrameEvaluation {
    int                 t = 0;
    std::vector<Point2> pred;
    std::vector<Point2> gt;
    std::vector<bool>   gt_visible;
};

/// MEE per frame index over ground-truth-visible points; frames without visible points are skipped.
inline std::vector<std::pair<int, double>> mee_over_duration(std::span<const FrameEvaluation> frames) {
    std::vector<std::pair<int, double>> curve;
    for (const auto& f : frames) {
        if (std::any_of(f.gt_visible.begin(), f.gt_visible.end(), [](bool b) { return b; })) {
            curve.emplace_back(f.t, mee(f.pred, f.gt, f.gt_visible));
        }
    }
    if (curve.empty()) {
        throw UndefinedMetric("no frame has visible ground-truth points");
    }
    return curve;
}

struct MetricsCounts {
    std::size_t mee_pairs       = 0;
    std::size_t mcd_frames      = 0;
    std::size_t occluded_pairs  = 0;
    std::size_t duration_frames = 0;
};

struct MetricsReport {
    double                              mee_px    = 0.0;
    double                              mcd_px    = 0.0;
    double                              delta_avg = 0.0;
    std::optional<double>               delta64_occluded;
    std::vector<std::pair<int, double>> mee_by_duration;
    MetricsCounts                       counts;
};

/// Scores a whole run. MEE, delta_avg and MCD use ground-truth-visible pairs of frames t >= 1 (frame 0
/// holds the queries); <delta64 uses mask-occluded pairs; the duration curve covers every frame.
inline MetricsReport evaluate_run(std::span<const FrameEvaluation> frames) {
    MetricsReport       report;
    std::vector<Point2> pred, gt, occ_pred, occ_gt;
    double              mcd_sum = 0.0;
    const bool          skip_first = frames.size() > 1;
    for (const auto& f : frames) {
        if (f.pred.size() != f.gt.size() || f.gt_visible.size() != f.gt.size()) {
            throw InvalidInput("frame " + std::to_string(f.t) + " has misaligned predictions and ground truth");
        }
        std::vector<Point2> frame_pred, frame_gt;
        for (std::size_t i = 0; i < f.gt.size(); ++i) {
            if (f.gt_visible[i]) {
                frame_pred.push_back(f.pred[i]);
                frame_gt.push_back(f.gt[i]);
            } else {
                occ_pred.push_back(f.pred[i]);
                occ_gt.push_back(f.gt[i]);
            }
        }
        if ((skip_first && f.t == frames.front().t) || frame_gt.empty()) {
            continue;
        }
        pred.insert(pred.end(), frame_pred.begin(), frame_pred.end());
        gt.insert(gt.end(), frame_gt.begin(), frame_gt.end());
        mcd_sum += mcd(frame_pred, frame_gt);
        ++report.counts.mcd_frames;
    }
    const std::vector<bool> all(pred.size(), true);
    report.mee_px             = mee(pred, gt, all);
    report.delta_avg          = delta_avg(pred, gt, all);
    report.mcd_px             = mcd_sum / static_cast<double>(report.counts.mcd_frames);
    report.counts.mee_pairs   = pred.size();
    report.counts.occluded_pairs = occ_pred.size();
    if (!occ_pred.empty()) {
        report.delta64_occluded = delta64_occluded(occ_pred, occ_gt, std::vector<bool>(occ_pred.size(), true));
    }
    report.mee_by_duration        = mee_over_duration(frames);
    report.counts.duration_frames = report.mee_by_duration.size();
    return report;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& [t, v] : r.mee_by_duration) {
        curve.push_back({{"t", t}, {"mee_px", v}});
    }
    return {{"mee_px", r.mee_px},
            {"mcd_px", r.mcd_px},
            {"delta_avg", r.delta_avg},
            {"delta64_occluded", r.delta64_occluded ? nlohmann::json(*r.delta64_occluded) : nlohmann::json(nullptr)},
            {"mee_by_duration", std::move(curve)},
            {"counts",
             {{"mee_pairs", r.counts.mee_pairs},
              {"mcd_frames", r.counts.mcd_frames},
              {"occluded_pairs", r.counts.occluded_pairs},
              {"duration_frames", r.counts.duration_frames}}}};
}

}  // namespace amfst
