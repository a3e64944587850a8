#pragma once

#include "amfst/core.hpp"

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <typeinfo>
#include <vector>

namespace amfst {

/// Base for backend-specific cached per-frame data (image pyramids, frame times, ...).
struct FeaturePayload {
    virtual ~FeaturePayload() = default;
};

/// Immutable per-frame features. Cheap to copy; the payload is shared.
class FrameFeatures {
  public:
    FrameFeatures(FrameId frame_id, int width, int height, std::uint64_t backend_id,
                  std::shared_ptr<const FeaturePayload> payload)
      : frame_id_(frame_id), width_(width), height_(height), backend_id_(backend_id), payload_(std::move(payload)) {
        if (width <= 0 || height <= 0) {
            throw InvalidInput("frame features need positive dimensions");
        }
    }

    [[nodiscard]] FrameId       frame_id() const { return frame_id_; }
    [[nodiscard]] int           width() const { return width_; }
    [[nodiscard]] int           height() const { return height_; }
    [[nodiscard]] std::uint64_t backend_id() const { return backend_id_; }

    template <typename Payload>
    [[nodiscard]] const Payload& payload() const {
        const auto* typed = dynamic_cast<const Payload*>(payload_.get());
        if (typed == nullptr) {
            throw ContractViolation(std::string("frame features do not carry a ") + typeid(Payload).name());
        }
        return *typed;
    }

  private:
    FrameId                               frame_id_;
    int                                   width_;
    int                                   height_;
    std::uint64_t                         backend_id_;
    std::shared_ptr<const FeaturePayload> payload_;
};

struct FlowQueryResult {
    std::vector<Point2> displaced;
    std::vector<bool>   valid;

    [[nodiscard]] std::size_t size() const { return displaced.size(); }
};

/// Two-frame sparse flow estimator. Implementations must be pure given their inputs.
class FlowBackend {
  public:
    FlowBackend() : id_(next_id()) {}
    virtual ~FlowBackend() = default;

    FlowBackend(const FlowBackend&)            = delete;
    FlowBackend& operator=(const FlowBackend&) = delete;

    [[nodiscard]] std::uint64_t id() const { return id_; }

    [[nodiscard]] virtual std::string name() const = 0;

    [[nodiscard]] virtual FrameFeatures extract_features(const GrayImage& image, FrameId frame_id) const = 0;

    /// For every query in `src`, estimates the position of the same scene point in `dst`.
    /// Out-of-bounds queries come back unchanged with valid=false.
    [[nodiscard]] virtual FlowQueryResult estimate_flow(const FrameFeatures& src, const FrameFeatures& dst,
                                                        std::span<const Point2> queries) const = 0;

  protected:
    void check_owned(const FrameFeatures& src, const FrameFeatures& dst) const {
        if (src.backend_id() != id_ || dst.backend_id() != id_) {
            throw ContractViolation("frame features were produced by a different flow backend");
        }
        if (src.width() != dst.width() || src.height() != dst.height()) {
            throw ContractViolation("frame features have mismatched dimensions");
        }
    }

    static void check_image(const GrayImage& image) {
        if (image.empty() || image.width() <= 0 || image.height() <= 0) {
            throw InvalidInput("cannot extract features from an empty image");
        }
    }

  private:
    static std::uint64_t next_id() {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1);
    }

    std::uint64_t id_;
};

}  // namespace amfst
