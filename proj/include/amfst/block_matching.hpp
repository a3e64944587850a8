#pragma once

#include "amfst/core.hpp"
#include "amfst/flow_backend.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace amfst {

struct BlockMatchingParams {
    int levels = 3;
    int window = 11;  // odd
    int search = 8;   // +- pixels per level
};

namespace detail {

inline float sample_bilinear(const GrayImage& image, double x, double y) {
    const double cx = std::clamp(x, 0.0, static_cast<double>(image.width() - 1));
    const double cy = std::clamp(y, 0.0, static_cast<double>(image.height() - 1));
    const int    x0 = static_cast<int>(std::floor(cx));
    const int    y0 = static_cast<int>(std::floor(cy));
    const int    x1 = std::min(x0 + 1, image.width() - 1);
    const int    y1 = std::min(y0 + 1, image.height() - 1);
    const double fx = cx - x0;
    const double fy = cy - y0;
    const double top    = (1.0 - fx) * image(x0, y0) + fx * image(x1, y0);
    const double bottom = (1.0 - fx) * image(x0, y1) + fx * image(x1, y1);
    return static_cast<float>((1.0 - fy) * top + fy * bottom);
}

/// 5-tap binomial blur followed by 2x decimation.
inline GrayImage pyramid_down(const GrayImage& image) {
    constexpr std::array<float, 5> kTaps{1.0F / 16, 4.0F / 16, 6.0F / 16, 4.0F / 16, 1.0F / 16};
    const int                      w = image.width();
    const int                      h = image.height();

    GrayImage horizontal(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.0F;
            for (int k = -2; k <= 2; ++k) {
                acc += kTaps[k + 2] * image(std::clamp(x + k, 0, w - 1), y);
            }
            horizontal(x, y) = acc;
        }
    }
    GrayImage out((w + 1) / 2, (h + 1) / 2);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            float acc = 0.0F;
            for (int k = -2; k <= 2; ++k) {
                acc += kTaps[k + 2] * horizontal(2 * x, std::clamp(2 * y + k, 0, h - 1));
            }
            out(x, y) = acc;
        }
    }
    return out;
}

struct PyramidPayload final : FeaturePayload {
    std::vector<GrayImage> levels;
};

inline double parabolic_offset(double minus, double center, double plus) {
    const double denom = minus - 2.0 * center + plus;
    if (!(denom > 0.0)) {
        return 0.0;
    }
    return std::clamp(0.5 * (minus - plus) / denom, -0.5, 0.5);
}

}  // namespace detail

/// Coarse-to-fine SAD block matching over a Gaussian pyramid, with parabolic sub-pixel refinement at
/// the finest level.
class BlockMatchingBackend final : public FlowBackend {
  public:
    explicit BlockMatchingBackend(BlockMatchingParams params = {}) : params_(params) {
        if (params_.levels < 1 || params_.window < 3 || params_.window % 2 == 0 || params_.search < 1) {
            throw InvalidInput("block matching needs levels >= 1, an odd window >= 3 and search >= 1");
        }
    }

    [[nodiscard]] std::string name() const override { return "block-matching"; }

    [[nodiscard]] const BlockMatchingParams& params() const { return params_; }

    [[nodiscard]] FrameFeatures extract_features(const GrayImage& image, FrameId frame_id) const override {
        check_image(image);
        auto payload = std::make_shared<detail::PyramidPayload>();
        payload->levels.push_back(image);
        for (int level = 1; level < params_.levels; ++level) {
            payload->levels.push_back(detail::pyramid_down(payload->levels.back()));
        }
        return {frame_id, image.width(), image.height(), id(), std::move(payload)};
    }

    [[nodiscard]] FlowQueryResult estimate_flow(const FrameFeatures& src, const FrameFeatures& dst,
                                                std::span<const Point2> queries) const override {
        check_owned(src, dst);
        const auto& src_levels = src.payload<detail::PyramidPayload>().levels;
        const auto& dst_levels = dst.payload<detail::PyramidPayload>().levels;

        FlowQueryResult result;
        result.displaced.reserve(queries.size());
        result.valid.reserve(queries.size());
        for (const Point2& query : queries) {
            if (!in_bounds(query, src.width(), src.height())) {
                result.displaced.push_back(query);
                result.valid.push_back(false);
                continue;
            }
            const Point2 moved = query + match(src_levels, dst_levels, query);
            result.displaced.push_back(moved);
            result.valid.push_back(in_bounds(moved, dst.width(), dst.height()));
        }
        return result;
    }

  private:
    Point2 match(const std::vector<GrayImage>& src_levels, const std::vector<GrayImage>& dst_levels,
                 Point2 query) const {
        const int radius = params_.window / 2;
        const int search = params_.search;
        const int win    = params_.window;
        const int span   = win + 2 * search;

        std::vector<float>  patch(static_cast<std::size_t>(win) * win);
        std::vector<float>  region(static_cast<std::size_t>(span) * span);
        std::vector<double> cost(static_cast<std::size_t>(2 * search + 1) * (2 * search + 1));

        Point2 displacement{};
        for (int level = params_.levels - 1; level >= 0; --level) {
            const double scale  = std::ldexp(1.0, level);
            const Point2 center = (1.0 / scale) * query;
            if (level != params_.levels - 1) {
                displacement = 2.0 * displacement;
            }
            const GrayImage& from = src_levels[static_cast<std::size_t>(level)];
            const GrayImage& to   = dst_levels[static_cast<std::size_t>(level)];

            for (int j = 0; j < win; ++j) {
                for (int i = 0; i < win; ++i) {
                    patch[static_cast<std::size_t>(j) * win + i] =
                        detail::sample_bilinear(from, center.x + i - radius, center.y + j - radius);
                }
            }
            const Point2 base = center + displacement;
            for (int v = 0; v < span; ++v) {
                for (int u = 0; u < span; ++u) {
                    region[static_cast<std::size_t>(v) * span + u] =
                        detail::sample_bilinear(to, base.x + u - radius - search, base.y + v - radius - search);
                }
            }

            double best_cost = std::numeric_limits<double>::infinity();
            int    best_x = 0, best_y = 0;
            for (int oy = -search; oy <= search; ++oy) {
                for (int ox = -search; ox <= search; ++ox) {
                    double sad = 0.0;
                    for (int j = 0; j < win; ++j) {
                        const float* p = &patch[static_cast<std::size_t>(j) * win];
                        const float* r = &region[static_cast<std::size_t>(j + oy + search) * span + ox + search];
                        for (int i = 0; i < win; ++i) {
                            sad += std::fabs(p[i] - r[i]);
                        }
                    }
                    cost[static_cast<std::size_t>(oy + search) * (2 * search + 1) + ox + search] = sad;
                    // Prefer the smallest offset on ties so identical frames map to zero motion.
                    if (sad < best_cost ||
                        (sad == best_cost && std::abs(ox) + std::abs(oy) < std::abs(best_x) + std::abs(best_y))) {
                        best_cost = sad;
                        best_x    = ox;
                        best_y    = oy;
                    }
                }
            }

            Point2 step{static_cast<double>(best_x), static_cast<double>(best_y)};
            // An exact match (zero cost) is already the answer; refinement would only add bias.
            if (level == 0 && best_cost > 0.0) {
                const int  stride = 2 * search + 1;
                const auto at     = [&](int ox, int oy) {
                    return cost[static_cast<std::size_t>(oy + search) * stride + ox + search];
                };
                if (best_x > -search && best_x < search) {
                    step.x += detail::parabolic_offset(at(best_x - 1, best_y), best_cost, at(best_x + 1, best_y));
                }
                if (best_y > -search && best_y < search) {
                    step.y += detail::parabolic_offset(at(best_x, best_y - 1), best_cost, at(best_x, best_y + 1));
                }
            }
            displacement = displacement + step;
        }
        return displacement;
    }

    BlockMatchingParams params_;
};

}  // namespace amfst
