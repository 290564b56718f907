#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sled/parallel.hpp"

namespace sled {

/// Interleaved RGB raster with channel values in [0,1]. Row-major, origin at
/// the top-left corner; pixel (r,c) starts at data[3*(r*width+c)].
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

    float* px(int r, int c) { return data.data() + 3 * (static_cast<std::size_t>(r) * width + c); }
    const float* px(int r, int c) const {
        return data.data() + 3 * (static_cast<std::size_t>(r) * width + c);
    }
    std::size_t n_pixels() const { return static_cast<std::size_t>(width) * height; }

    static RgbImage filled(int w, int h, float r, float g, float b) {
        RgbImage img(w, h);
        for (std::size_t i = 0; i < img.n_pixels(); ++i) {
            img.data[3 * i + 0] = r;
            img.data[3 * i + 1] = g;
            img.data[3 * i + 2] = b;
        }
        return img;
    }
};

/// Single-channel float raster in [0,1] (or Lab channel units where noted).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    GrayImage() = default;
    GrayImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    float at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
};

/// Binary per-pixel mask. Used both for artifact pixels (hair, dark corners)
/// and for the final lesion mask; 1 = set.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : data) n += (v != 0);
        return n;
    }
};

using ArtifactMask = Mask;
using LesionMask = Mask;

/// Per-pixel outlier scores in [0,1].
struct ScoreMap {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    ScoreMap() = default;
    ScoreMap(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    float at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
};

/// Rec. 601 luma; keeps values in [0,1].
GrayImage luminance(const RgbImage& img);

} // namespace sled
