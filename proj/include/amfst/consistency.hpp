#pragma once

#include "amfst/core.hpp"
#include "amfst/flow_backend.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace amfst {

/// Dense rows x cols table, row-major. Rows follow the candidate frame order, columns the points.
template <typename T>
class Table {
  public:
    Table() = default;
    Table(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    T&       operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    std::span<T>       row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    friend bool operator==(const Table&, const Table&) = default;

  private:
    std::size_t    rows_ = 0;
    std::size_t    cols_ = 0;
    std::vector<T> data_;
};

/// Forward-backward endpoint errors; unusable cells hold kInvalidEpe.
using EpeMatrix = Table<double>;
/// 1 = occluded.
using OcclusionMatrix = Table<std::uint8_t>;

/// A retained frame: its cached features and each point's position at the time it was current.
struct FrameRecord {
    FrameId             frame_id = 0;
    FrameFeatures       features;
    std::vector<Point2> anchors;
    // false: the point was occluded when this frame was current; its anchor is the last visible position.
    std::vector<bool> anchor_valid;
};

struct ForwardBackward {
    std::vector<Point2> predictions;
    std::vector<double> epe;
};

struct CandidateGrid {
    std::vector<FrameId> frame_ids;
    Table<Point2>        predictions;
    EpeMatrix            epe;
    OcclusionMatrix      mask_occluded;
};

/// Round-trips every valid anchor ref -> current -> ref and measures how far it lands from its start.
inline ForwardBackward forward_backward_epe(const FrameRecord& ref, const FrameFeatures& current,
                                            const FlowBackend& backend, std::size_t point_count) {
    if (ref.anchors.size() != point_count || ref.anchor_valid.size() != point_count) {
        throw ContractViolation("frame record " + std::to_string(ref.frame_id) + " holds " +
                                std::to_string(ref.anchors.size()) + " anchors, tracker has " +
                                std::to_string(point_count) + " points");
    }
    // Every point is queried so the query index always equals the point index.
    const FlowQueryResult forward = backend.estimate_flow(ref.features, current, ref.anchors);

    std::vector<Point2> returning(point_count);
    for (std::size_t p = 0; p < point_count; ++p) {
        returning[p] = ref.anchor_valid[p] && forward.valid[p] ? forward.displaced[p] : ref.anchors[p];
    }
    const FlowQueryResult backward = backend.estimate_flow(current, ref.features, returning);

    ForwardBackward out{std::vector<Point2>(point_count), std::vector<double>(point_count, kInvalidEpe)};
    for (std::size_t p = 0; p < point_count; ++p) {
        if (!ref.anchor_valid[p]) {
            out.predictions[p] = ref.anchors[p];
            continue;
        }
        out.predictions[p] = forward.displaced[p];
        if (!forward.valid[p] || !backward.valid[p]) {
            continue;
        }
        const double epe = distance(ref.anchors[p], backward.displaced[p]);
        out.epe[p]       = std::isfinite(epe) ? epe : kInvalidEpe;
    }
    return out;
}

/// One row per reference frame: predictions in `current`, forward-backward EPE, and mask occlusion.
/// A cell is mask-occluded when its prediction falls inside `mask` (nearest pixel) or off the image.
inline CandidateGrid build_candidate_grid(std::span<const FrameRecord* const> frames, const FrameFeatures& current,
                                          const Mask* mask, const FlowBackend& backend) {
    if (frames.empty()) {
        throw InvalidInput("candidate grid needs at least one reference frame");
    }
    if (mask != nullptr && (mask->width() != current.width() || mask->height() != current.height())) {
        throw InvalidInput("mask dimensions do not match the current frame");
    }
    const std::size_t point_count = frames.front()->anchors.size();

    CandidateGrid grid;
    grid.predictions   = Table<Point2>(frames.size(), point_count);
    grid.epe           = EpeMatrix(frames.size(), point_count, kInvalidEpe);
    grid.mask_occluded = OcclusionMatrix(frames.size(), point_count, 0);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const FrameRecord& ref = *frames[f];
        grid.frame_ids.push_back(ref.frame_id);
        const ForwardBackward fb = forward_backward_epe(ref, current, backend, point_count);
        for (std::size_t p = 0; p < point_count; ++p) {
            const Point2 pred        = fb.predictions[p];
            grid.predictions(f, p)   = pred;
            grid.epe(f, p)           = fb.epe[p];
            const bool outside       = !in_bounds(pred, current.width(), current.height());
            grid.mask_occluded(f, p) = (outside || (mask != nullptr && mask_contains(*mask, pred))) ? 1 : 0;
        }
    }
    return grid;
}

inline CandidateGrid build_candidate_grid(std::span<const FrameRecord> frames, const FrameFeatures& current,
                                          const Mask* mask, const FlowBackend& backend) {
    std::vector<const FrameRecord*> refs;
    refs.reserve(frames.size());
    for (const auto& f : frames) {
        refs.push_back(&f);
    }
    return build_candidate_grid(std::span<const FrameRecord* const>(refs), current, mask, backend);
}

}  // namespace amfst
