#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace amfst {

using FrameId = int;

// Error taxonomy shared by every module.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct UndefinedMetric : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConfigRejected : InvalidInput {
    using InvalidInput::InvalidInput;
};

/// Sub-pixel image-plane position in pixels.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr bool   operator==(Point2 a, Point2 b) = default;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] bool   finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Row-major 2D raster.
template <typename T>
class Grid {
  public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

    [[nodiscard]] int  width() const { return width_; }
    [[nodiscard]] int  height() const { return height_; }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    T&       operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    [[nodiscard]] bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::span<T>       data() { return data_; }
    std::span<const T> data() const { return data_; }

    friend bool operator==(const Grid&, const Grid&) = default;

  private:
    static std::size_t checked_size(int width, int height) {
        if (width < 0 || height < 0) {
            throw InvalidInput("grid dimensions must be non-negative");
        }
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int            width_  = 0;
    int            height_ = 0;
    std::vector<T> data_;
};

/// Grayscale intensities on a 0..255 scale.
using GrayImage = Grid<float>;
/// Binary raster, nonzero = instrument / occluder.
using Mask = Grid<std::uint8_t>;

/// Pixel centers sit on integer coordinates; the valid domain is [0, w-1] x [0, h-1].
inline bool in_bounds(Point2 p, int width, int height) {
    return p.finite() && p.x >= 0.0 && p.y >= 0.0 && p.x <= width - 1 && p.y <= height - 1;
}

/// Nearest-pixel containment. Positions off the raster are never inside.
inline bool mask_contains(const Mask& mask, Point2 p) {
    if (!p.finite()) {
        return false;
    }
    const double rx = std::round(p.x);
    const double ry = std::round(p.y);
    if (rx < 0.0 || ry < 0.0 || rx >= mask.width() || ry >= mask.height()) {
        return false;
    }
    return mask(static_cast<int>(rx), static_cast<int>(ry)) != 0;
}

inline constexpr double kInvalidEpe = std::numeric_limits<double>::infinity();

inline bool is_invalid_epe(double value) { return !(value < kInvalidEpe); }

/// Counter-based 64-bit generator usable as a UniformRandomBitGenerator.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z               = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z               = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

inline std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
    SplitMix64 g(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    return g();
}

}  // namespace amfst
