#pragma once

#include "amfst/core.hpp"
#include "amfst/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace amfst {

// Instrument masks -------------------------------------------------------------------------------------

/// Externally segmented instrument masks, one per frame.
struct MaskSequence {
    std::vector<Mask> frames;

    [[nodiscard]] std::size_t size() const { return frames.size(); }
    [[nodiscard]] const Mask& at(std::size_t t) const { return frames.at(t); }
};

/// Reads 000.png, 001.png, ... from `directory`; nonzero pixels are instrument.
inline MaskSequence load_mask_sequence(const std::filesystem::path& directory) {
    MaskSequence seq;
    for (const auto& path : list_numbered_pngs(directory)) {
        Mask mask = read_mask_png(path);
        if (!seq.frames.empty() &&
            (mask.width() != seq.frames.front().width() || mask.height() != seq.frames.front().height())) {
            throw InvalidInput("mask " + path.filename().string() + " has different dimensions");
        }
        seq.frames.push_back(std::move(mask));
    }
    return seq;
}

// Stereo disparity -------------------------------------------------------------------------------------

struct DisparityParams {
    int    min_disparity   = 0;
    int    max_disparity   = 64;
    int    window          = 11;
    double ambiguity_ratio = 0.95;  // best / second-best SAD above this is ambiguous
};

struct DisparityMap {
    Grid<float> disparity;  // pixels, left-image coordinates
    Mask        valid;

    [[nodiscard]] int width() const { return disparity.width(); }
    [[nodiscard]] int height() const { return disparity.height(); }
};

/// Row-wise SAD block matching of a rectified pair: left(x, y) is matched against right(x - d, y).
/// The second-best cost ignores the two disparities adjacent to the best one.
inline DisparityMap compute_disparity(const GrayImage& left, const GrayImage& right, DisparityParams params = {}) {
    if (left.width() != right.width() || left.height() != right.height()) {
        throw InvalidInput("stereo images have different dimensions");
    }
    if (left.empty()) {
        throw InvalidInput("stereo images are empty");
    }
    if (params.window < 1 || params.window % 2 == 0 || params.min_disparity < 0 ||
        params.max_disparity < params.min_disparity) {
        throw InvalidInput("invalid disparity parameters");
    }
    const int w = left.width();
    const int h = left.height();
    const int r = params.window / 2;
    const int n = params.max_disparity - params.min_disparity + 1;

    DisparityMap map{Grid<float>(w, h, 0.0F), Mask(w, h, 0)};
    if (w < params.window || h < params.window) {
        return map;
    }

    auto diff = [&](int x, int y, int d) -> double {
        const int xr = x - d;
        return xr >= 0 ? std::fabs(static_cast<double>(left(x, y)) - right(xr, y)) : 0.0;
    };

    // colsum[k][x]: sum over the current window rows of |L - R| at disparity min + k.
    std::vector<std::vector<double>> colsum(static_cast<std::size_t>(n), std::vector<double>(w, 0.0));
    std::vector<double>              prefix(static_cast<std::size_t>(w) + 1);
    std::vector<double>              cost(static_cast<std::size_t>(n));
    constexpr double                 kInf = std::numeric_limits<double>::infinity();

    for (int y = r; y < h - r; ++y) {
        for (int k = 0; k < n; ++k) {
            const int d = params.min_disparity + k;
            auto&     cs = colsum[static_cast<std::size_t>(k)];
            if (y == r) {
                for (int x = 0; x < w; ++x) {
                    double s = 0.0;
                    for (int yy = 0; yy < params.window; ++yy) {
                        s += diff(x, yy, d);
                    }
                    cs[static_cast<std::size_t>(x)] = s;
                }
            } else {
                for (int x = 0; x < w; ++x) {
                    cs[static_cast<std::size_t>(x)] += diff(x, y + r, d) - diff(x, y - r - 1, d);
                }
            }
        }
        for (int x = r; x < w - r; ++x) {
            int    best_k = -1;
            double best   = kInf;
            for (int k = 0; k < n; ++k) {
                const int d = params.min_disparity + k;
                if (x - r - d < 0) {
                    cost[static_cast<std::size_t>(k)] = kInf;
                    continue;
                }
                const auto& cs = colsum[static_cast<std::size_t>(k)];
                double      s  = 0.0;
                for (int xx = x - r; xx <= x + r; ++xx) {
                    s += cs[static_cast<std::size_t>(xx)];
                }
                cost[static_cast<std::size_t>(k)] = s;
                if (s < best) {
                    best   = s;
                    best_k = k;
                }
            }
            if (best_k < 0) {
                continue;
            }
            double second = kInf;
            for (int k = 0; k < n; ++k) {
                if (std::abs(k - best_k) > 1) {
                    second = std::min(second, cost[static_cast<std::size_t>(k)]);
                }
            }
            // Without a competing disparity the match cannot be verified as unique.
            const bool ambiguous = !std::isfinite(second) || second <= 0.0 || best / second > params.ambiguity_ratio;
            if (ambiguous) {
                continue;
            }
            double sub = 0.0;
            if (best_k > 0 && best_k + 1 < n && std::isfinite(cost[best_k - 1]) && std::isfinite(cost[best_k + 1])) {
                const double cm    = cost[static_cast<std::size_t>(best_k - 1)];
                const double cp    = cost[static_cast<std::size_t>(best_k + 1)];
                const double denom = cm - 2.0 * best + cp;
                if (denom > 0.0) {
                    sub = std::clamp(0.5 * (cm - cp) / denom, -0.5, 0.5);
                }
            }
            map.disparity(x, y) = static_cast<float>(params.min_disparity + best_k + sub);
            map.valid(x, y)     = 1;
        }
    }
    return map;
}

/// Disparity interval equivalent to a depth interval for a rectified rig (disparity = f B / z).
inline std::pair<double, double> disparity_range_from_depth(double z_near, double z_far, double focal_px,
                                                            double baseline) {
    if (!(z_near > 0.0) || !(z_far > z_near) || !(focal_px > 0.0) || !(baseline > 0.0)) {
        throw InvalidInput("depth range needs 0 < z_near < z_far and positive focal length and baseline");
    }
    return {focal_px * baseline / z_far, focal_px * baseline / z_near};
}

/// Nearest band of the scene: from `top_fraction` of the robust (2nd to 98th percentile) disparity span
/// below the 98th percentile, up to the largest valid disparity. Near objects have large disparity.
inline std::pair<double, double> auto_disparity_range(const DisparityMap& map, double top_fraction = 0.3) {
    std::vector<double> values;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (map.valid(x, y) != 0) {
                values.push_back(map.disparity(x, y));
            }
        }
    }
    if (values.empty()) {
        throw InvalidInput("disparity map has no valid pixels");
    }
    std::sort(values.begin(), values.end());
    auto at = [&](double q) { return values[static_cast<std::size_t>(q * static_cast<double>(values.size() - 1))]; };
    const double lo  = at(0.02);
    const double hi  = at(0.98);
    const double top = values.back();
    if (top - lo < 1e-9) {
        return {lo - 0.5, top + 0.5};
    }
    return {hi - top_fraction * (hi - lo), top};
}

/// Pixels whose valid disparity lies in [min_disp, max_disp], in row-major order.
inline std::vector<Point2> threshold_foreground(const DisparityMap& map, double min_disp, double max_disp) {
    if (!(min_disp < max_disp)) {
        throw InvalidInput("disparity threshold needs min < max");
    }
    std::vector<Point2> out;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const double d = map.disparity(x, y);
            if (map.valid(x, y) != 0 && d >= min_disp && d <= max_disp) {
                out.push_back({static_cast<double>(x), static_cast<double>(y)});
            }
        }
    }
    return out;
}

// K-Medoids (PAM) ----------------------------------------------------------------------------------------

struct KMedoidsResult {
    std::vector<std::size_t> medoid_indices;
    std::vector<Point2>      medoids;
    double                   cost = 0.0;
    std::vector<double>      cost_history;  // after BUILD, then after every accepted swap
};

/// Sum over points of the distance to the nearest medoid.
inline double medoid_cost(std::span<const Point2> points, std::span<const std::size_t> medoids) {
    double total = 0.0;
    for (const Point2& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : medoids) {
            best = std::min(best, distance(p, points[m]));
        }
        total += best;
    }
    return total;
}

/// PAM: greedy BUILD, then repeatedly apply the best cost-reducing (medoid, non-medoid) swap.
inline KMedoidsResult kmedoids(std::span<const Point2> points, std::size_t k) {
    const std::size_t n = points.size();
    if (k < 1 || k > n) {
        throw InvalidInput("k-medoids needs 1 <= k <= " + std::to_string(n) + ", got k = " + std::to_string(k));
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto             dist = [&](std::size_t a, std::size_t b) { return distance(points[a], points[b]); };

    std::vector<std::size_t> medoids;
    std::vector<bool>        is_medoid(n, false);
    std::vector<double>      nearest(n, kInf);

    // BUILD
    {
        std::size_t first = 0;
        double      best  = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += dist(i, j);
            }
            if (s < best) {
                best  = s;
                first = i;
            }
        }
        medoids.push_back(first);
        is_medoid[first] = true;
        for (std::size_t j = 0; j < n; ++j) {
            nearest[j] = dist(j, first);
        }
    }
    while (medoids.size() < k) {
        std::size_t pick = n;
        double      gain = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_medoid[i]) {
                continue;
            }
            double g = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                g += std::max(nearest[j] - dist(j, i), 0.0);
            }
            if (g > gain) {
                gain = g;
                pick = i;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = true;
        for (std::size_t j = 0; j < n; ++j) {
            nearest[j] = std::min(nearest[j], dist(j, pick));
        }
    }

    KMedoidsResult result;
    double         cost = medoid_cost(points, medoids);
    result.cost_history.push_back(cost);

    // SWAP
    std::vector<std::size_t> owner(n);
    std::vector<double>      second(n);
    while (true) {
        for (std::size_t j = 0; j < n; ++j) {
            double      d1 = kInf, d2 = kInf;
            std::size_t o  = 0;
            for (std::size_t m = 0; m < medoids.size(); ++m) {
                const double d = dist(j, medoids[m]);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    o  = m;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            nearest[j] = d1;
            second[j]  = d2;
            owner[j]   = o;
        }
        double      best_delta = 0.0;
        std::size_t best_slot = 0, best_h = n;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) {
                    continue;
                }
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dh = dist(j, h);
                    delta += owner[j] == slot ? std::min(dh, second[j]) - nearest[j] : std::min(dh - nearest[j], 0.0);
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_slot  = slot;
                    best_h     = h;
                }
            }
        }
        if (best_h == n || !(best_delta < -1e-12 * std::max(1.0, cost))) {
            break;
        }
        const double next_cost = medoid_cost(points, [&] {
            auto trial        = medoids;
            trial[best_slot]  = best_h;
            return trial;
        }());
        if (!(next_cost < cost)) {
            break;
        }
        is_medoid[medoids[best_slot]] = false;
        medoids[best_slot]            = best_h;
        is_medoid[best_h]             = true;
        cost                          = next_cost;
        result.cost_history.push_back(cost);
    }

    result.medoid_indices = medoids;
    for (std::size_t m : medoids) {
        result.medoids.push_back(points[m]);
    }
    result.cost = cost;
    return result;
}

/// Deterministic stride subsample to at most `limit` points (keeps PAM's quadratic cost bounded).
inline std::vector<Point2> stride_subsample(std::span<const Point2> points, std::size_t limit) {
    if (limit == 0 || points.size() <= limit) {
        return {points.begin(), points.end()};
    }
    std::vector<Point2> out;
    out.reserve(limit);
    for (std::size_t i = 0; i < limit; ++i) {
        out.push_back(points[i * points.size() / limit]);
    }
    return out;
}

}  // namespace amfst
