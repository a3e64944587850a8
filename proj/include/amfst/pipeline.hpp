#pragma once

#include "amfst/io_formats.hpp"
#include "amfst/metrics.hpp"
#include "amfst/synth.hpp"
#include "amfst/tracker.hpp"
#include "amfst/tracker_amfst.hpp"
#include "amfst/tracker_mfst.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace amfst {

/// Inputs whose shapes do not line up (frame counts, point counts, scenes).
struct Misaligned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TrackerKind { chain, mfst, amfst };

inline TrackerKind parse_tracker_kind(const std::string& name) {
    if (name == "chain") return TrackerKind::chain;
    if (name == "mfst") return TrackerKind::mfst;
    if (name == "amfst") return TrackerKind::amfst;
    throw InvalidInput("unknown tracker '" + name + "' (expected chain, mfst or amfst)");
}

inline std::string to_string(TrackerKind kind) {
    switch (kind) {
        case TrackerKind::chain: return "chain";
        case TrackerKind::mfst: return "mfst";
        case TrackerKind::amfst: return "amfst";
    }
    return "?";
}

struct TrackerParams {
    TrackerKind      kind = TrackerKind::amfst;
    double           tau  = 2.0;
    std::size_t      n_f  = 6;
    std::size_t      combo_size = 0;
    std::vector<int> intervals{1, 2, 4, 8, 16, 32};
};

inline std::unique_ptr<PointTracker> make_tracker(const TrackerParams& params, const FlowBackend& backend,
                                                  const FrameFeatures& first, std::vector<Point2> queries) {
    switch (params.kind) {
        case TrackerKind::chain:
            return std::make_unique<MfstTracker>(backend, first, std::move(queries), MfstConfig::chain(params.tau));
        case TrackerKind::mfst:
            return std::make_unique<MfstTracker>(backend, first, std::move(queries),
                                                 MfstConfig{params.intervals, true, params.tau});
        case TrackerKind::amfst:
            return std::make_unique<AmfstTracker>(backend, first, std::move(queries),
                                                  AmfstConfig{params.n_f, params.combo_size, params.tau});
    }
    throw InvalidInput("unknown tracker kind");
}

struct RunResult {
    std::vector<TrackOutputFrame> frames;
    std::vector<double>           step_ms;  // wall-clock of each step call
};

using FeatureSource = std::function<FrameFeatures(int t)>;
using MaskSource    = std::function<const Mask*(int t)>;

/// Tracks `queries` from frame 0 through frame_count - 1.
inline RunResult run_tracker(const TrackerParams& params, const FlowBackend& backend, const FeatureSource& features,
                             const MaskSource& masks, int frame_count, std::vector<Point2> queries) {
    if (frame_count < 1) {
        throw InvalidInput("sequence has no frames");
    }
    auto      tracker = make_tracker(params, backend, features(0), std::move(queries));
    RunResult result;
    result.frames.push_back(tracker->last_output());
    for (int t = 1; t < frame_count; ++t) {
        const FrameFeatures current = features(t);
        const Mask*         mask    = masks ? masks(t) : nullptr;
        const auto          start   = std::chrono::steady_clock::now();
        result.frames.push_back(tracker->step(current, mask));
        const auto stop = std::chrono::steady_clock::now();
        result.step_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return result;
}

/// Pairs a trajectory with ground truth frame by frame; the shapes must agree exactly.
inline std::vector<FrameEvaluation> align_with_truth(std::span<const TrackOutputFrame> frames,
                                                     const GroundTruth&               truth) {
    if (static_cast<int>(frames.size()) != truth.frame_count()) {
        throw Misaligned("trajectory has " + std::to_string(frames.size()) + " frames, ground truth has " +
                         std::to_string(truth.frame_count()));
    }
    std::vector<FrameEvaluation> out;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& frame = frames[t];
        if (static_cast<int>(frame.points.size()) != truth.point_count()) {
            throw Misaligned("frame " + std::to_string(t) + " has " + std::to_string(frame.points.size()) +
                             " points, ground truth has " + std::to_string(truth.point_count()));
        }
        FrameEvaluation eval{frame.frame_id, {}, truth.positions[t], {}};
        for (std::size_t p = 0; p < frame.points.size(); ++p) {
            eval.pred.push_back(frame.points[p].position);
            eval.gt_visible.push_back(!truth.occluded[t][p]);
        }
        out.push_back(std::move(eval));
    }
    return out;
}

inline MetricsReport evaluate_against_truth(std::span<const TrackOutputFrame> frames, const GroundTruth& truth) {
    const auto aligned = align_with_truth(frames, truth);
    return evaluate_run(aligned);
}

inline double mean_of(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

/// Nearest-rank 95th percentile.
inline double p95_of(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size())));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace amfst
