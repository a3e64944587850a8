#pragma once

#include "amfst/consistency.hpp"
#include "amfst/core.hpp"
#include "amfst/flow_backend.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace amfst {

struct TrackedPoint {
    Point2                 position{};
    bool                   occluded = false;
    std::optional<FrameId> source_frame;  // back-check frame that produced the accepted candidate
};

struct TrackOutputFrame {
    FrameId                   frame_id = 0;
    std::vector<TrackedPoint> points;
};

/// Sequential tracker over one sequence. Frame 0 is consumed at construction.
class PointTracker {
  public:
    virtual ~PointTracker() = default;

    [[nodiscard]] virtual std::string kind() const = 0;

    /// Processes the next frame; `mask` may be null when no instrument mask is available.
    virtual TrackOutputFrame step(const FrameFeatures& current, const Mask* mask) = 0;

    [[nodiscard]] virtual const TrackOutputFrame& last_output() const = 0;

    /// Number of frame records currently held for back-checking.
    [[nodiscard]] virtual std::size_t retained_frame_count() const = 0;
};

/// EPE threshold of 2 px at 512x512, scaled with the image diagonal.
inline double default_tau(int width, int height) {
    return 2.0 * std::hypot(width, height) / std::hypot(512.0, 512.0);
}

inline void validate_queries(std::span<const Point2> queries, int width, int height) {
    if (queries.empty()) {
        throw InvalidInput("at least one query point is required");
    }
    std::string offending;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (!in_bounds(queries[i], width, height)) {
            offending += (offending.empty() ? "" : ", ") + std::to_string(i);
        }
    }
    if (!offending.empty()) {
        throw InvalidInput("query points out of bounds at indices: " + offending);
    }
}

inline TrackOutputFrame initial_output(FrameId frame_id, std::span<const Point2> queries) {
    TrackOutputFrame out{frame_id, {}};
    for (const Point2& q : queries) {
        out.points.push_back({q, false, frame_id});
    }
    return out;
}

inline void check_consecutive(FrameId previous, const FrameFeatures& current) {
    if (current.frame_id() != previous + 1) {
        throw ContractViolation("expected frame " + std::to_string(previous + 1) + ", got " +
                                std::to_string(current.frame_id()));
    }
}

inline FrameRecord record_from_output(const FrameFeatures& features, const TrackOutputFrame& output) {
    FrameRecord record{features.frame_id(), features, {}, {}};
    record.anchors.reserve(output.points.size());
    record.anchor_valid.reserve(output.points.size());
    for (const auto& point : output.points) {
        record.anchors.push_back(point.position);
        record.anchor_valid.push_back(!point.occluded);
    }
    return record;
}

}  // namespace amfst
