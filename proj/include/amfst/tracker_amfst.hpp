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

struct AmfstConfig {
    std::size_t n_f        = 6;
    std::size_t combo_size = 0;  // N; 0 selects the default N = n_f
    double      tau        = 2.0;

    [[nodiscard]] std::size_t n() const { return combo_size == 0 ? n_f : combo_size; }

    void validate() const {
        if (n_f < 1) {
            throw InvalidInput("A-MFST needs n_f >= 1");
        }
        if (n() < 1 || n() > n_f + 1) {
            throw InvalidInput("A-MFST combination size must lie in [1, n_f + 1]");
        }
        if (!(tau > 0.0)) {
            throw InvalidInput("tau must be positive");
        }
    }
};

struct PointStatus {
    bool                   occluded = false;
    std::optional<FrameId> pinned_frame;  // best frame before the occlusion started
    std::optional<FrameId> source_frame;  // f*(p) of the last visible step
    Point2                 position{};
};

struct AmfstDecision {
    std::vector<bool>    occluded;
    std::vector<FrameId> pinned;  // pinned frame per point; meaningful only where occluded
    Selection            selection;
};

/// Everything A-MFST does with a candidate grid: occlusion flags, pinning, column zeroing, optimal
/// combination and per-point assignment. Visible points left without a usable member are occluded.
inline AmfstDecision decide_amfst(const CandidateGrid& grid, std::span<const PointStatus> previous,
                                  std::size_t combo_size, double tau, bool warm_up) {
    const std::size_t points = grid.epe.cols();
    if (previous.size() != points) {
        throw ContractViolation("point status count does not match the candidate grid");
    }
    AmfstDecision decision;
    decision.occluded = occlusion_condition(grid.epe, grid.mask_occluded, tau);
    decision.pinned.assign(points, 0);

    auto row_of = [&](FrameId id) -> std::optional<std::size_t> {
        const auto it = std::find(grid.frame_ids.begin(), grid.frame_ids.end(), id);
        if (it == grid.frame_ids.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - grid.frame_ids.begin());
    };
    auto pin_for = [&](std::size_t p) -> FrameId {
        const PointStatus& s = previous[p];
        return s.occluded ? *s.pinned_frame : *s.source_frame;
    };

    std::set<std::size_t> required;
    for (std::size_t p = 0; p < points; ++p) {
        if (decision.occluded[p]) {
            decision.pinned[p] = pin_for(p);
            if (const auto row = row_of(decision.pinned[p])) {
                required.insert(*row);
            }
        }
    }

    const EpeMatrix   selectable = selectable_epe(grid.epe, grid.mask_occluded, decision.occluded);
    const std::size_t              pool = grid.frame_ids.size();
    const std::size_t              n    = warm_up ? pool : std::min(combo_size, pool);
    const std::vector<std::size_t> required_rows(required.begin(), required.end());
    decision.selection = select_optimal(selectable, grid.frame_ids, n, decision.occluded, required_rows);

    for (std::size_t p = 0; p < points; ++p) {
        if (!decision.occluded[p] && !decision.selection.assignment[p]) {
            decision.occluded[p] = true;
            decision.pinned[p]   = pin_for(p);
        }
    }
    return decision;
}

/// Adaptive multi-flow tracker: keeps the n_f most reliable frames, re-chosen every step as the
/// frame combination with the lowest summed per-point forward-backward EPE.
class AmfstTracker final : public PointTracker {
  public:
    AmfstTracker(const FlowBackend& backend, const FrameFeatures& first, std::vector<Point2> queries,
                 AmfstConfig config)
      : backend_(&backend), config_(config) {
        config_.validate();
        if (first.frame_id() != 0) {
            throw InvalidInput("tracking must start at frame 0");
        }
        validate_queries(queries, first.width(), first.height());
        last_ = initial_output(first.frame_id(), queries);
        for (const Point2& q : queries) {
            status_.push_back({false, std::nullopt, first.frame_id(), q});
        }
        pending_.emplace(record_from_output(first, last_));
    }

    [[nodiscard]] std::string        kind() const override { return "amfst"; }
    [[nodiscard]] const AmfstConfig& config() const { return config_; }

    TrackOutputFrame step(const FrameFeatures& current, const Mask* mask) override {
        check_consecutive(last_.frame_id, current);
        const FrameId t = current.frame_id();

        // Candidate pool: reliable set plus frame t-1.
        std::map<FrameId, const FrameRecord*> pool;
        for (const auto& [id, record] : reliable_) {
            pool.emplace(id, &record);
        }
        pool.emplace(pending_->frame_id, &*pending_);
        std::vector<const FrameRecord*> refs;
        for (const auto& [id, record] : pool) {
            refs.push_back(record);
        }

        const CandidateGrid grid    = build_candidate_grid(refs, current, mask, *backend_);
        const bool          warm_up = static_cast<std::size_t>(t) <= config_.n_f;
        const AmfstDecision decision = decide_amfst(grid, status_, config_.n(), config_.tau, warm_up);

        TrackOutputFrame out{t, last_.points};
        for (std::size_t p = 0; p < status_.size(); ++p) {
            PointStatus&  s     = status_[p];
            TrackedPoint& point = out.points[p];
            if (decision.occluded[p]) {
                s.pinned_frame     = decision.pinned[p];
                s.occluded         = true;
                point.occluded     = true;
                point.source_frame = std::nullopt;
                continue;
            }
            const std::size_t row = *decision.selection.assigned_row[p];
            s.occluded            = false;
            s.pinned_frame        = std::nullopt;
            s.source_frame        = grid.frame_ids[row];
            s.position            = grid.predictions(row, p);
            point                 = {s.position, false, s.source_frame};
        }

        // New reliable set: C* plus every frame still pinned by an occluded point.
        std::set<FrameId> keep(decision.selection.best.frames.begin(), decision.selection.best.frames.end());
        for (const auto& s : status_) {
            if (s.occluded) {
                keep.insert(*s.pinned_frame);
            }
        }
        std::map<FrameId, FrameRecord> next;
        for (FrameId id : keep) {
            if (auto it = reliable_.find(id); it != reliable_.end()) {
                next.emplace(id, std::move(it->second));
            } else if (pending_->frame_id == id) {
                next.emplace(id, std::move(*pending_));
            } else {
                throw ContractViolation("selected frame " + std::to_string(id) + " is not retained");
            }
        }
        reliable_ = std::move(next);
        pending_.emplace(record_from_output(current, out));
        last_ = out;
        return out;
    }

    [[nodiscard]] const TrackOutputFrame& last_output() const override { return last_; }

    /// Reliable set plus the pending t-1 record.
    [[nodiscard]] std::size_t retained_frame_count() const override { return reliable_.size() + 1; }

    [[nodiscard]] std::vector<FrameId> reliable_frame_ids() const {
        std::vector<FrameId> ids;
        for (const auto& [id, record] : reliable_) {
            ids.push_back(id);
        }
        return ids;
    }

    [[nodiscard]] const std::vector<PointStatus>& statuses() const { return status_; }

  private:
    const FlowBackend*             backend_;
    AmfstConfig                    config_;
    std::map<FrameId, FrameRecord> reliable_;
    std::optional<FrameRecord>     pending_;
    std::vector<PointStatus>       status_;
    TrackOutputFrame               last_;
};

}  // namespace amfst
