#pragma once

#include "amfst/consistency.hpp"
#include "amfst/selection.hpp"
#include "amfst/tracker.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace amfst {

struct MfstConfig {
    std::vector<int> intervals{1, 2, 4, 8, 16, 32};
    bool             include_frame_zero = true;  // the permanently retained "infinite" chain
    double           tau                = 2.0;

    void validate() const {
        if (intervals.empty()) {
            throw InvalidInput("MFST needs at least one back-check interval");
        }
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            if (intervals[i] < 1 || (i > 0 && intervals[i] <= intervals[i - 1])) {
                throw InvalidInput("MFST intervals must be strictly increasing and >= 1");
            }
        }
        if (!(tau > 0.0)) {
            throw InvalidInput("tau must be positive");
        }
    }

    /// Single interval, no frame 0: plain frame-to-frame chaining.
    static MfstConfig chain(double tau) { return {{1}, false, tau}; }
};

/// Fixed-interval multi-flow tracker: back-checks frames t - interval (and frame 0) and keeps the
/// minimum-EPE candidate per point.
class MfstTracker final : public PointTracker {
  public:
    MfstTracker(const FlowBackend& backend, const FrameFeatures& first, std::vector<Point2> queries,
                MfstConfig config)
      : backend_(&backend), config_(std::move(config)) {
        config_.validate();
        validate_queries(queries, first.width(), first.height());
        last_ = initial_output(first.frame_id(), queries);
        if (first.frame_id() != 0) {
            throw InvalidInput("tracking must start at frame 0");
        }
        records_.emplace(first.frame_id(), record_from_output(first, last_));
    }

    [[nodiscard]] std::string kind() const override {
        return config_.intervals == std::vector<int>{1} && !config_.include_frame_zero ? "chain" : "mfst";
    }

    [[nodiscard]] const MfstConfig& config() const { return config_; }

    /// {t - d : d in intervals, t - d >= 0} plus frame 0 when enabled; ascending, deduplicated.
    static std::vector<FrameId> candidate_frames(FrameId t, const MfstConfig& config) {
        std::set<FrameId> ids;
        for (int d : config.intervals) {
            if (t - d >= 0) {
                ids.insert(t - d);
            }
        }
        if (config.include_frame_zero) {
            ids.insert(0);
        }
        return {ids.begin(), ids.end()};
    }

    TrackOutputFrame step(const FrameFeatures& current, const Mask* mask) override {
        check_consecutive(last_.frame_id, current);
        const FrameId t = current.frame_id();

        std::vector<const FrameRecord*> refs;
        for (FrameId id : candidate_frames(t, config_)) {
            refs.push_back(&records_.at(id));
        }
        const CandidateGrid     grid     = build_candidate_grid(refs, current, mask, *backend_);
        const std::vector<bool> occluded = occlusion_condition(grid.epe, grid.mask_occluded, config_.tau);

        TrackOutputFrame out{t, last_.points};
        for (std::size_t p = 0; p < out.points.size(); ++p) {
            TrackedPoint& point = out.points[p];
            if (occluded[p]) {
                point.occluded     = true;
                point.source_frame = std::nullopt;
                continue;
            }
            // Rows ascend by frame id, so the first strict minimum is the lowest-id tie winner.
            std::optional<std::size_t> best;
            for (std::size_t f = 0; f < grid.epe.rows(); ++f) {
                if (grid.mask_occluded(f, p) != 0 || is_invalid_epe(grid.epe(f, p))) {
                    continue;
                }
                if (!best || grid.epe(f, p) < grid.epe(*best, p)) {
                    best = f;
                }
            }
            point.position     = grid.predictions(*best, p);
            point.occluded     = false;
            point.source_frame = grid.frame_ids[*best];
        }

        records_.emplace(t, record_from_output(current, out));
        const FrameId oldest_needed = t + 1 - config_.intervals.back();
        for (auto it = records_.begin(); it != records_.end();) {
            const bool keep = it->first >= oldest_needed || (config_.include_frame_zero && it->first == 0);
            it              = keep ? std::next(it) : records_.erase(it);
        }
        last_ = out;
        return out;
    }

    [[nodiscard]] const TrackOutputFrame& last_output() const override { return last_; }
    [[nodiscard]] std::size_t             retained_frame_count() const override { return records_.size(); }

    [[nodiscard]] std::vector<FrameId> retained_frame_ids() const {
        std::vector<FrameId> ids;
        for (const auto& [id, record] : records_) {
            ids.push_back(id);
        }
        return ids;
    }

  private:
    const FlowBackend*             backend_;
    MfstConfig                     config_;
    std::map<FrameId, FrameRecord> records_;
    TrackOutputFrame               last_;
};

}  // namespace amfst
