#pragma once

#include "amfst/core.hpp"
#include "amfst/flow_backend.hpp"
#include "amfst/synth.hpp"

#include <memory>
#include <random>
#include <span>

namespace amfst {

namespace detail {

struct OracleFramePayload final : FeaturePayload {
    explicit OracleFramePayload(double t) : time(t) {}
    double time;
};

}  // namespace detail

/// Flow backend answering queries from the scene's closed-form deformation, optionally perturbed by
/// seeded Gaussian noise (std `sigma` per coordinate, one draw per query and per call).
class OracleBackend final : public FlowBackend {
  public:
    explicit OracleBackend(const Scene& scene, double sigma = 0.0, std::uint64_t seed = 0)
      : deformation_(scene.deformation()), width_(scene.width()), height_(scene.height()), sigma_(sigma),
        seed_(seed) {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
            throw InvalidInput("oracle noise sigma must be a finite value >= 0");
        }
    }

    [[nodiscard]] std::string name() const override { return sigma_ > 0.0 ? "oracle-noisy" : "oracle"; }
    [[nodiscard]] double      sigma() const { return sigma_; }

    /// The image is only dimension-checked; oracle features are the frame time.
    [[nodiscard]] FrameFeatures extract_features(const GrayImage& image, FrameId frame_id) const override {
        check_image(image);
        if (image.width() != width_ || image.height() != height_) {
            throw InvalidInput("image dimensions do not match the oracle scene");
        }
        return features_at(frame_id);
    }

    [[nodiscard]] FrameFeatures features_at(FrameId frame_id) const {
        return {frame_id, width_, height_, id(), std::make_shared<detail::OracleFramePayload>(frame_id)};
    }

    [[nodiscard]] FlowQueryResult estimate_flow(const FrameFeatures& src, const FrameFeatures& dst,
                                                std::span<const Point2> queries) const override {
        check_owned(src, dst);
        const double t_src = src.payload<detail::OracleFramePayload>().time;
        const double t_dst = dst.payload<detail::OracleFramePayload>().time;
        // Identical frames carry zero motion; noise is only drawn between distinct frames.
        const bool noisy = sigma_ > 0.0 && src.frame_id() != dst.frame_id();

        FlowQueryResult result;
        result.displaced.reserve(queries.size());
        result.valid.reserve(queries.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const Point2 q = queries[i];
            if (!in_bounds(q, width_, height_)) {
                result.displaced.push_back(q);
                result.valid.push_back(false);
                continue;
            }
            Point2 moved = t_src == t_dst ? q : deformation_.flow(q, t_src, t_dst);
            if (noisy) {
                moved = moved + noise(src.frame_id(), dst.frame_id(), i);
            }
            result.displaced.push_back(moved);
            result.valid.push_back(in_bounds(moved, width_, height_));
        }
        return result;
    }

  private:
    [[nodiscard]] Point2 noise(FrameId src, FrameId dst, std::size_t query_index) const {
        std::uint64_t key = mix_hash(seed_, static_cast<std::uint64_t>(static_cast<std::int64_t>(src)));
        key               = mix_hash(key, static_cast<std::uint64_t>(static_cast<std::int64_t>(dst)));
        key               = mix_hash(key, static_cast<std::uint64_t>(query_index));
        SplitMix64                       rng(key);
        std::normal_distribution<double> gauss(0.0, sigma_);
        const double                     dx = gauss(rng);
        return {dx, gauss(rng)};
    }

    Deformation   deformation_;
    int           width_;
    int           height_;
    double        sigma_;
    std::uint64_t seed_;
};

inline std::unique_ptr<OracleBackend> oracle_with_noise(const Scene& scene, double sigma, std::uint64_t seed) {
    return std::make_unique<OracleBackend>(scene, sigma, seed);
}

}  // namespace amfst
