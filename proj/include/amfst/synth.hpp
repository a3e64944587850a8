#pragma once

#include "amfst/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace amfst {

inline constexpr const char* kFormatVersion = "amfst-1";

struct DeformationConfig {
    Point2                translation{};                  // px / frame
    std::array<double, 4> affine_rate{0.0, 0.0, 0.0, 0.0};  // row-major R, M(t) = I + t R about the image center
    double                nonrigid_amplitude  = 0.0;        // px
    double                nonrigid_wavelength = 64.0;       // px
    double                temporal_frequency  = 0.0;        // cycles / frame
};

enum class OccluderShape { rectangle, ellipse };

struct OccluderConfig {
    OccluderShape shape = OccluderShape::rectangle;
    Point2        center{};    // position at t = 0; moves as center + velocity * t
    Point2        size{};      // full extent (rectangle) or diameters (ellipse)
    Point2        velocity{};  // px / frame
    int           first_frame = 0;
    int           last_frame  = 0;  // inclusive
    float         intensity   = 200.0F;

    [[nodiscard]] bool active(int t) const { return t >= first_frame && t <= last_frame; }
};

struct SceneConfig {
    int    width        = 256;
    int    height       = 256;
    int    frame_count  = 2;
    int    point_count  = 1;
    double point_margin = 32.0;
    // Explicit frame-0 positions; when non-empty they replace random sampling.
    std::vector<Point2>         points;
    DeformationConfig           deformation;
    std::vector<OccluderConfig> occluders;
    std::uint64_t               texture_seed = 1;
    std::uint64_t               rng_seed     = 1;
};

/// D_t = translate(v t) o affine_c(I + t R) o shear_t, with shear_t two sequential sinusoidal shears
/// (x first, then y). Each factor has an exact inverse, so D_t is invertible in closed form.
class Deformation {
  public:
    Deformation() = default;
    Deformation(const DeformationConfig& config, Point2 center) : config_(config), center_(center) {}

    [[nodiscard]] Point2 forward(Point2 p, double t) const {
        const double sx = p.x + shear(p.y, t);
        const double sy = p.y + shear(sx, t);
        const auto&  r  = config_.affine_rate;
        const double dx = sx - center_.x;
        const double dy = sy - center_.y;
        return {center_.x + dx + t * (r[0] * dx + r[1] * dy) + config_.translation.x * t,
                center_.y + dy + t * (r[2] * dx + r[3] * dy) + config_.translation.y * t};
    }

    [[nodiscard]] Point2 inverse(Point2 p, double t) const {
        const auto&  r   = config_.affine_rate;
        const double a   = 1.0 + t * r[0];
        const double b   = t * r[1];
        const double c   = t * r[2];
        const double d   = 1.0 + t * r[3];
        const double det = a * d - b * c;
        const double ux  = p.x - config_.translation.x * t - center_.x;
        const double uy  = p.y - config_.translation.y * t - center_.y;
        const double sx  = center_.x + (d * ux - b * uy) / det;
        const double sy  = center_.y + (-c * ux + a * uy) / det;
        const double y   = sy - shear(sx, t);
        const double x   = sx - shear(y, t);
        return {x, y};
    }

    /// Position at `t_to` of the scene point seen at `p` at time `t_from`.
    [[nodiscard]] Point2 flow(Point2 p, double t_from, double t_to) const {
        return forward(inverse(p, t_from), t_to);
    }

    [[nodiscard]] double affine_determinant(double t) const {
        const auto& r = config_.affine_rate;
        return (1.0 + t * r[0]) * (1.0 + t * r[3]) - (t * r[1]) * (t * r[2]);
    }

    [[nodiscard]] const DeformationConfig& config() const { return config_; }

  private:
    [[nodiscard]] double shear(double u, double t) const {
        if (config_.nonrigid_amplitude == 0.0) {
            return 0.0;
        }
        constexpr double kTwoPi = 2.0 * std::numbers::pi;
        const double     phase  = kTwoPi * u / config_.nonrigid_wavelength;
        return config_.nonrigid_amplitude *
               (std::sin(phase + kTwoPi * config_.temporal_frequency * t) - std::sin(phase));
    }

    DeformationConfig config_{};
    Point2            center_{};
};

struct GroundTruth {
    int                              width       = 0;
    int                              height      = 0;
    std::vector<std::vector<Point2>> positions;  // [frame][point]
    std::vector<std::vector<bool>>   occluded;   // [frame][point], mask containment
    std::vector<std::optional<Mask>> masks;      // [frame]; nullopt when no occluder is active

    [[nodiscard]] int frame_count() const { return static_cast<int>(positions.size()); }
    [[nodiscard]] int point_count() const { return positions.empty() ? 0 : static_cast<int>(positions[0].size()); }
};

inline Mask rasterize_occluders(const SceneConfig& config, int t) {
    Mask mask(config.width, config.height);
    for (const auto& occ : config.occluders) {
        if (!occ.active(t)) {
            continue;
        }
        const Point2 c  = occ.center + static_cast<double>(t) * occ.velocity;
        const double hx = 0.5 * occ.size.x;
        const double hy = 0.5 * occ.size.y;
        const int    x0 = std::max(0, static_cast<int>(std::floor(c.x - hx)));
        const int    x1 = std::min(config.width - 1, static_cast<int>(std::ceil(c.x + hx)));
        const int    y0 = std::max(0, static_cast<int>(std::floor(c.y - hy)));
        const int    y1 = std::min(config.height - 1, static_cast<int>(std::ceil(c.y + hy)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx     = x - c.x;
                const double dy     = y - c.y;
                bool         inside = false;
                if (occ.shape == OccluderShape::rectangle) {
                    inside = std::fabs(dx) <= hx && std::fabs(dy) <= hy;
                } else if (hx > 0.0 && hy > 0.0) {
                    inside = (dx / hx) * (dx / hx) + (dy / hy) * (dy / hy) <= 1.0;
                }
                if (inside) {
                    mask(x, y) = 1;
                }
            }
        }
    }
    return mask;
}

/// Synthetic deformable scene: configuration, invertible deformation and the ground truth it induces.
class Scene {
  public:
    explicit Scene(SceneConfig config) : config_(std::move(config)) {
        validate();
        deformation_ = Deformation(config_.deformation, {0.5 * (config_.width - 1), 0.5 * (config_.height - 1)});
        build_ground_truth();
    }

    [[nodiscard]] const SceneConfig& config() const { return config_; }
    [[nodiscard]] const Deformation& deformation() const { return deformation_; }
    [[nodiscard]] const GroundTruth& ground_truth() const { return truth_; }
    [[nodiscard]] int                width() const { return config_.width; }
    [[nodiscard]] int                height() const { return config_.height; }
    [[nodiscard]] int                frame_count() const { return config_.frame_count; }

    /// Current-frame mask or nullptr when no occluder is active.
    [[nodiscard]] const Mask* mask_at(int t) const {
        const auto& m = truth_.masks.at(static_cast<std::size_t>(t));
        return m ? &*m : nullptr;
    }

  private:
    void validate() const {
        if (config_.width < 16 || config_.height < 16) {
            throw ConfigRejected("scene must be at least 16x16 pixels");
        }
        if (config_.frame_count < 2) {
            throw ConfigRejected("scene needs frame_count >= 2");
        }
        if (config_.points.empty() && config_.point_count < 1) {
            throw ConfigRejected("scene needs point_count >= 1");
        }
        if (config_.deformation.nonrigid_amplitude != 0.0 && !(config_.deformation.nonrigid_wavelength > 0.0)) {
            throw ConfigRejected("non-rigid wavelength must be positive");
        }
        const Deformation probe(config_.deformation, {});
        for (int t = 0; t < config_.frame_count; ++t) {
            if (!(probe.affine_determinant(t) > 0.1)) {
                throw ConfigRejected("affine rate makes the deformation near-singular at frame " + std::to_string(t));
            }
        }
        for (const auto& occ : config_.occluders) {
            if (occ.size.x < 0.0 || occ.size.y < 0.0 || occ.first_frame > occ.last_frame) {
                throw ConfigRejected("occluder needs non-negative size and first_frame <= last_frame");
            }
        }
    }

    void build_ground_truth() {
        std::vector<Point2> initial = config_.points;
        if (initial.empty()) {
            std::mt19937_64                        rng(config_.rng_seed);
            const double                           m = config_.point_margin;
            std::uniform_real_distribution<double> ux(m, config_.width - 1 - m);
            std::uniform_real_distribution<double> uy(m, config_.height - 1 - m);
            if (!(config_.width - 1 - 2 * m > 0.0) || !(config_.height - 1 - 2 * m > 0.0)) {
                throw ConfigRejected("point_margin leaves no room for points");
            }
            for (int p = 0; p < config_.point_count; ++p) {
                const double x = ux(rng);
                initial.push_back({x, uy(rng)});
            }
        }
        config_.point_count = static_cast<int>(initial.size());

        truth_.width  = config_.width;
        truth_.height = config_.height;
        for (int t = 0; t < config_.frame_count; ++t) {
            std::vector<Point2> frame;
            frame.reserve(initial.size());
            for (std::size_t p = 0; p < initial.size(); ++p) {
                const Point2 pos = t == 0 ? initial[p] : deformation_.forward(initial[p], t);
                if (!in_bounds(pos, config_.width, config_.height)) {
                    throw ConfigRejected("point " + std::to_string(p) + " leaves the image at frame " +
                                         std::to_string(t));
                }
                frame.push_back(pos);
            }
            const bool any_active = std::any_of(config_.occluders.begin(), config_.occluders.end(),
                                                [t](const OccluderConfig& o) { return o.active(t); });
            std::vector<bool> flags(initial.size(), false);
            if (any_active) {
                Mask mask = rasterize_occluders(config_, t);
                for (std::size_t p = 0; p < frame.size(); ++p) {
                    flags[p] = mask_contains(mask, frame[p]);
                }
                truth_.masks.emplace_back(std::move(mask));
            } else {
                truth_.masks.emplace_back(std::nullopt);
            }
            truth_.positions.push_back(std::move(frame));
            truth_.occluded.push_back(std::move(flags));
        }
    }

    SceneConfig config_;
    Deformation deformation_;
    GroundTruth truth_;
};

/// Band-limited value noise: an octave sum of smoothly interpolated hashed lattices.
class ValueNoiseTexture {
  public:
    explicit ValueNoiseTexture(std::uint64_t seed) : seed_(seed) {}

    /// Intensity in [0, 1].
    [[nodiscard]] double operator()(double x, double y) const {
        constexpr std::array<double, 4> kSpacing{24.0, 12.0, 6.0, 3.0};
        constexpr std::array<double, 4> kWeight{0.4, 0.3, 0.2, 0.1};
        double                          acc = 0.0;
        for (std::size_t o = 0; o < kSpacing.size(); ++o) {
            acc += kWeight[o] * lattice(x / kSpacing[o], y / kSpacing[o], o);
        }
        return acc;
    }

  private:
    [[nodiscard]] double node(long ix, long iy, std::size_t octave) const {
        std::uint64_t h = mix_hash(seed_, octave);
        h               = mix_hash(h, static_cast<std::uint64_t>(ix));
        h               = mix_hash(h, static_cast<std::uint64_t>(iy));
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }

    static double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

    [[nodiscard]] double lattice(double x, double y, std::size_t octave) const {
        const double fx = std::floor(x);
        const double fy = std::floor(y);
        const long   ix = static_cast<long>(fx);
        const long   iy = static_cast<long>(fy);
        const double sx = fade(x - fx);
        const double sy = fade(y - fy);
        const double a  = node(ix, iy, octave);
        const double b  = node(ix + 1, iy, octave);
        const double c  = node(ix, iy + 1, octave);
        const double d  = node(ix + 1, iy + 1, octave);
        return (a + sx * (b - a)) * (1.0 - sy) + (c + sx * (d - c)) * sy;
    }

    std::uint64_t seed_;
};

/// Renders frame `t`: texture pulled back through D_t, occluders painted as flat regions.
inline GrayImage render_frame(const Scene& scene, int t) {
    const ValueNoiseTexture texture(scene.config().texture_seed);
    GrayImage               image(scene.width(), scene.height());
    for (int y = 0; y < scene.height(); ++y) {
        for (int x = 0; x < scene.width(); ++x) {
            const Point2 origin = t == 0 ? Point2{static_cast<double>(x), static_cast<double>(y)}
                                         : scene.deformation().inverse({static_cast<double>(x), static_cast<double>(y)}, t);
            image(x, y)         = static_cast<float>(20.0 + 215.0 * texture(origin.x, origin.y));
        }
    }
    if (scene.mask_at(t) != nullptr) {
        // Later occluders paint over earlier ones.
        for (const auto& occ : scene.config().occluders) {
            if (!occ.active(t)) {
                continue;
            }
            SceneConfig single = scene.config();
            single.occluders   = {occ};
            const Mask part    = rasterize_occluders(single, t);
            for (int y = 0; y < image.height(); ++y) {
                for (int x = 0; x < image.width(); ++x) {
                    if (part(x, y) != 0) {
                        image(x, y) = occ.intensity;
                    }
                }
            }
        }
    }
    return image;
}

inline std::vector<GrayImage> render_frames(const Scene& scene) {
    std::vector<GrayImage> frames;
    frames.reserve(static_cast<std::size_t>(scene.frame_count()));
    for (int t = 0; t < scene.frame_count(); ++t) {
        frames.push_back(render_frame(scene, t));
    }
    return frames;
}

// JSON ----------------------------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const Point2& p) { j = nlohmann::json::array({p.x, p.y}); }
inline void from_json(const nlohmann::json& j, Point2& p) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigRejected("expected a two-element [x, y] array");
    }
    p = {j[0].get<double>(), j[1].get<double>()};
}

inline void to_json(nlohmann::json& j, const DeformationConfig& d) {
    j = {{"translation", d.translation},
         {"affine_rate", d.affine_rate},
         {"nonrigid_amplitude", d.nonrigid_amplitude},
         {"nonrigid_wavelength", d.nonrigid_wavelength},
         {"temporal_frequency", d.temporal_frequency}};
}
inline void from_json(const nlohmann::json& j, DeformationConfig& d) {
    d = {};
    if (j.contains("translation")) d.translation = j.at("translation").get<Point2>();
    if (j.contains("affine_rate")) d.affine_rate = j.at("affine_rate").get<std::array<double, 4>>();
    d.nonrigid_amplitude  = j.value("nonrigid_amplitude", 0.0);
    d.nonrigid_wavelength = j.value("nonrigid_wavelength", 64.0);
    d.temporal_frequency  = j.value("temporal_frequency", 0.0);
}

inline void to_json(nlohmann::json& j, const OccluderConfig& o) {
    j = {{"shape", o.shape == OccluderShape::rectangle ? "rectangle" : "ellipse"},
         {"center", o.center},
         {"size", o.size},
         {"velocity", o.velocity},
         {"active", {o.first_frame, o.last_frame}},
         {"intensity", o.intensity}};
}
inline void from_json(const nlohmann::json& j, OccluderConfig& o) {
    o                       = {};
    const std::string shape = j.value("shape", std::string("rectangle"));
    if (shape == "rectangle") {
        o.shape = OccluderShape::rectangle;
    } else if (shape == "ellipse") {
        o.shape = OccluderShape::ellipse;
    } else {
        throw ConfigRejected("unknown occluder shape '" + shape + "'");
    }
    o.center = j.at("center").get<Point2>();
    o.size   = j.at("size").get<Point2>();
    if (j.contains("velocity")) o.velocity = j.at("velocity").get<Point2>();
    const auto active = j.at("active").get<std::array<int, 2>>();
    o.first_frame     = active[0];
    o.last_frame      = active[1];
    o.intensity       = j.value("intensity", 200.0F);
}

inline void to_json(nlohmann::json& j, const SceneConfig& c) {
    j = {{"width", c.width},
         {"height", c.height},
         {"frame_count", c.frame_count},
         {"point_count", c.point_count},
         {"point_margin", c.point_margin},
         {"deformation", c.deformation},
         {"occluders", c.occluders},
         {"texture_seed", c.texture_seed},
         {"rng_seed", c.rng_seed}};
    if (!c.points.empty()) {
        j["points"] = c.points;
    }
}
inline void from_json(const nlohmann::json& j, SceneConfig& c) {
    c              = {};
    c.width        = j.at("width").get<int>();
    c.height       = j.at("height").get<int>();
    c.frame_count  = j.at("frame_count").get<int>();
    c.point_count  = j.value("point_count", 1);
    c.point_margin = j.value("point_margin", 32.0);
    if (j.contains("points")) c.points = j.at("points").get<std::vector<Point2>>();
    if (j.contains("deformation")) c.deformation = j.at("deformation").get<DeformationConfig>();
    if (j.contains("occluders")) c.occluders = j.at("occluders").get<std::vector<OccluderConfig>>();
    c.texture_seed = j.value("texture_seed", std::uint64_t{1});
    c.rng_seed     = j.value("rng_seed", std::uint64_t{1});
}

inline nlohmann::json ground_truth_to_json(const GroundTruth& truth) {
    nlohmann::json frames = nlohmann::json::array();
    for (int t = 0; t < truth.frame_count(); ++t) {
        nlohmann::json points = nlohmann::json::array();
        for (int p = 0; p < truth.point_count(); ++p) {
            const Point2 pos = truth.positions[t][p];
            points.push_back({{"x", pos.x}, {"y", pos.y}, {"occluded", static_cast<bool>(truth.occluded[t][p])}});
        }
        frames.push_back({{"t", t}, {"points", std::move(points)}});
    }
    return {{"version", kFormatVersion},
            {"width", truth.width},
            {"height", truth.height},
            {"frame_count", truth.frame_count()},
            {"point_count", truth.point_count()},
            {"frames", std::move(frames)}};
}

/// Masks are not part of the JSON form and come back empty.
inline GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    GroundTruth truth;
    truth.width  = j.value("width", 0);
    truth.height = j.value("height", 0);
    for (const auto& frame : j.at("frames")) {
        std::vector<Point2> positions;
        std::vector<bool>   flags;
        for (const auto& point : frame.at("points")) {
            positions.push_back({point.at("x").get<double>(), point.at("y").get<double>()});
            flags.push_back(point.value("occluded", false));
        }
        if (!truth.positions.empty() && positions.size() != truth.positions.front().size()) {
            throw InvalidInput("ground truth frames have differing point counts");
        }
        truth.positions.push_back(std::move(positions));
        truth.occluded.push_back(std::move(flags));
        truth.masks.emplace_back(std::nullopt);
    }
    return truth;
}

}  // namespace amfst
