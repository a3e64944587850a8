#pragma once

#include "amfst/core.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace amfst {

struct MissingInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::uint8_t> read_png_raw(const std::filesystem::path& path, png_uint_32& format, int& width,
                                              int& height) {
    if (!std::filesystem::exists(path)) {
        throw MissingInput("no such file: " + path.string());
    }
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&image, path.string().c_str()) == 0) {
        throw InvalidInput("cannot decode PNG " + path.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    if (color) {
        image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    } else {
        image.format = alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY;
    }
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr) == 0) {
        png_image_free(&image);
        throw InvalidInput("cannot decode PNG " + path.string() + ": " + image.message);
    }
    format = image.format;
    width  = static_cast<int>(image.width);
    height = static_cast<int>(image.height);
    return buffer;
}

}  // namespace detail

/// Loads an 8-bit PNG as grayscale. Color input is reduced with luma = 0.299R + 0.587G + 0.114B.
inline GrayImage read_gray_png(const std::filesystem::path& path) {
    png_uint_32 format = 0;
    int         width = 0, height = 0;
    const auto  raw      = detail::read_png_raw(path, format, width, height);
    const int   channels = static_cast<int>(PNG_IMAGE_PIXEL_CHANNELS(format));
    const bool  color    = (format & PNG_FORMAT_FLAG_COLOR) != 0;

    GrayImage image(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t base = (static_cast<std::size_t>(y) * width + x) * channels;
            if (color) {
                image(x, y) = static_cast<float>(0.299 * raw[base] + 0.587 * raw[base + 1] + 0.114 * raw[base + 2]);
            } else {
                image(x, y) = raw[base];
            }
        }
    }
    return image;
}

inline Mask read_mask_png(const std::filesystem::path& path) {
    const GrayImage gray = read_gray_png(path);
    Mask            mask(gray.width(), gray.height());
    for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) {
            mask(x, y) = gray(x, y) > 0.0F ? 1 : 0;
        }
    }
    return mask;
}

namespace detail {

inline void write_gray8(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& px) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width   = static_cast<png_uint_32>(width);
    image.height  = static_cast<png_uint_32>(height);
    image.format  = PNG_FORMAT_GRAY;
    if (png_image_write_to_file(&image, path.string().c_str(), 0, px.data(), 0, nullptr) == 0) {
        throw std::runtime_error("cannot write PNG " + path.string() + ": " + image.message);
    }
}

}  // namespace detail

inline void write_gray_png(const std::filesystem::path& path, const GrayImage& image) {
    std::vector<std::uint8_t> px(image.data().size());
    std::transform(image.data().begin(), image.data().end(), px.begin(), [](float v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    });
    detail::write_gray8(path, image.width(), image.height(), px);
}

inline void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
    std::vector<std::uint8_t> px(mask.data().size());
    std::transform(mask.data().begin(), mask.data().end(), px.begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v != 0 ? 255 : 0); });
    detail::write_gray8(path, mask.width(), mask.height(), px);
}

/// Zero-padded file name for frame index `t`, e.g. 007.png.
inline std::string sequence_file_name(int t, int width = 3) {
    std::string digits = std::to_string(t);
    if (static_cast<int>(digits.size()) < width) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return digits + ".png";
}

/// Lists the numbered PNGs of a directory in frame order. Numbering must start at 0 and be contiguous.
inline std::vector<std::filesystem::path> list_numbered_pngs(const std::filesystem::path& directory) {
    if (!std::filesystem::is_directory(directory)) {
        throw MissingInput("no such directory: " + directory.string());
    }
    std::map<long, std::filesystem::path> numbered;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") {
            continue;
        }
        const std::string stem = entry.path().stem().string();
        if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            continue;
        }
        const long index = std::stol(stem);
        if (!numbered.emplace(index, entry.path()).second) {
            throw InvalidInput("duplicate frame number " + std::to_string(index) + " in " + directory.string());
        }
    }
    if (numbered.empty()) {
        throw MissingInput("no numbered PNG files in " + directory.string());
    }
    const int pad = static_cast<int>(numbered.begin()->second.stem().string().size());
    std::vector<std::filesystem::path> paths;
    long                               expected = 0;
    for (const auto& [index, path] : numbered) {
        if (index != expected) {
            const std::string name = sequence_file_name(static_cast<int>(expected), pad);
            throw MissingInput("missing frame " + name.substr(0, name.size() - 4) + " in " + directory.string());
        }
        paths.push_back(path);
        ++expected;
    }
    return paths;
}

}  // namespace amfst
