#pragma once

#include "amfst/consistency.hpp"
#include "amfst/oracle_backend.hpp"
#include "amfst/synth.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace amfst {

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw InvalidInput("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double      h  = q * static_cast<double>(values.size() - 1);
    const auto        lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Features for every frame of an occlusion-free sequence plus its ground truth.
struct CalibrationSequence {
    std::vector<FrameFeatures> frames;
    const GroundTruth*         truth = nullptr;
};

inline CalibrationSequence oracle_calibration_sequence(const OracleBackend& backend, const Scene& scene) {
    CalibrationSequence seq;
    for (int t = 0; t < scene.frame_count(); ++t) {
        seq.frames.push_back(backend.features_at(t));
    }
    seq.truth = &scene.ground_truth();
    return seq;
}

/// Forward-backward EPE of ground-truth anchors between consecutive frames, over visible samples.
inline std::vector<double> consecutive_epe_samples(const FlowBackend& backend, const CalibrationSequence& seq) {
    std::vector<double> samples;
    const GroundTruth&  truth = *seq.truth;
    if (static_cast<int>(seq.frames.size()) != truth.frame_count()) {
        throw InvalidInput("calibration sequence and ground truth have different frame counts");
    }
    for (std::size_t t = 1; t < seq.frames.size(); ++t) {
        FrameRecord ref{seq.frames[t - 1].frame_id(), seq.frames[t - 1], truth.positions[t - 1], {}};
        ref.anchor_valid.resize(ref.anchors.size());
        for (std::size_t p = 0; p < ref.anchors.size(); ++p) {
            ref.anchor_valid[p] = !truth.occluded[t - 1][p];
        }
        const ForwardBackward fb = forward_backward_epe(ref, seq.frames[t], backend, ref.anchors.size());
        for (std::size_t p = 0; p < fb.epe.size(); ++p) {
            if (!truth.occluded[t][p] && !is_invalid_epe(fb.epe[p])) {
                samples.push_back(fb.epe[p]);
            }
        }
    }
    return samples;
}

/// tau such that a fraction `target_fpr` of visible samples would be flagged occluded.
inline double calibrate_tau(const FlowBackend& backend, std::span<const CalibrationSequence> sequences,
                            double target_fpr) {
    if (!(target_fpr > 0.0 && target_fpr < 1.0)) {
        throw InvalidInput("target false-positive rate must lie in (0, 1)");
    }
    std::vector<double> samples;
    for (const auto& seq : sequences) {
        const auto part = consecutive_epe_samples(backend, seq);
        samples.insert(samples.end(), part.begin(), part.end());
    }
    if (samples.empty()) {
        throw InvalidInput("no visible forward-backward samples to calibrate tau");
    }
    return quantile(std::move(samples), 1.0 - target_fpr);
}

}  // namespace amfst
