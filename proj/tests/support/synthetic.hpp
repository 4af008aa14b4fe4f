// Deterministic synthetic inputs for tests: images with controlled texture
// and color, and seeded point clouds for the SVM suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "imclass/dataview.hpp"
#include "imclass/image.hpp"
#include "imclass/rng.hpp"

namespace synthetic {

inline imclass::RasterImage flat_image(int w, int h, imclass::Rgb color) {
    return imclass::RasterImage(w, h, color);
}

inline imclass::GrayImage checkerboard(int w, int h, int cell, std::uint8_t a, std::uint8_t b) {
    imclass::GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.tone(x, y) = ((x / cell + y / cell) % 2 == 0) ? a : b;
    return img;
}

inline imclass::RasterImage checkerboard_rgb(int w, int h, int cell, imclass::Rgb a,
                                             imclass::Rgb b) {
    imclass::RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = ((x / cell + y / cell) % 2 == 0) ? a : b;
    return img;
}

// Sinusoidal grating modulated along x (vertical stripes) at the given
// spatial frequency in cycles/pixel.
inline imclass::GrayImage grating(int w, int h, double frequency, double phase = 0.0) {
    imclass::GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double v =
                128.0 + 100.0 * std::sin(2.0 * std::numbers::pi * frequency * x + phase);
            img.tone(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
        }
    return img;
}

inline imclass::RasterImage grating_rgb(int w, int h, double frequency, double phase = 0.0) {
    const imclass::GrayImage g = grating(w, h, frequency, phase);
    imclass::RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::uint8_t t = g.tone(x, y);
            img.at(x, y) = {t, t, t};
        }
    return img;
}

inline imclass::GrayImage random_gray(int w, int h, std::uint64_t seed) {
    imclass::GrayImage img(w, h);
    imclass::SplitMix64 rng(seed);
    for (auto& t : img.tones()) t = static_cast<std::uint8_t>(rng.next_below(256));
    return img;
}

inline imclass::RasterImage random_rgb(int w, int h, std::uint64_t seed) {
    imclass::RasterImage img(w, h);
    imclass::SplitMix64 rng(seed);
    for (auto& px : img.pixels())
        px = {static_cast<std::uint8_t>(rng.next_below(256)),
              static_cast<std::uint8_t>(rng.next_below(256)),
              static_cast<std::uint8_t>(rng.next_below(256))};
    return img;
}

// Paints pixels with squared distance <= r2 from (cx, cy).
inline void draw_disk(imclass::RasterImage& img, int cx, int cy, int r2, imclass::Rgb color) {
    const int r = static_cast<int>(std::sqrt(static_cast<double>(r2))) + 1;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy > r2) continue;
            const int x = cx + dx, y = cy + dy;
            if (x >= 0 && x < img.width() && y >= 0 && y < img.height()) img.at(x, y) = color;
        }
}

inline double gaussian(imclass::SplitMix64& rng) {
    // Box-Muller on the deterministic generator.
    double u1 = rng.next_double();
    while (u1 <= 1e-300) u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Two well-separated 2-D Gaussian clusters labeled -1/+1.
inline std::vector<imclass::Example> separable_pair(int per_class, double gap, std::uint64_t seed,
                                                    double sigma = 0.4) {
    imclass::SplitMix64 rng(seed);
    std::vector<imclass::Example> out;
    long long id = 0;
    for (int c = 0; c < 2; ++c) {
        const double cx = c == 0 ? -gap / 2 : gap / 2;
        for (int i = 0; i < per_class; ++i) {
            imclass::Example e;
            e.features = {cx + sigma * gaussian(rng), sigma * gaussian(rng)};
            e.label = c == 0 ? -1 : +1;
            e.id = id++;
            out.push_back(std::move(e));
        }
    }
    return out;
}

// k Gaussian clusters on a circle, labeled 0..k-1.
inline std::vector<imclass::Example> clusters(int k, int per_class, std::uint64_t seed,
                                              double radius = 4.0, double sigma = 0.4) {
    imclass::SplitMix64 rng(seed);
    std::vector<imclass::Example> out;
    long long id = 0;
    for (int c = 0; c < k; ++c) {
        const double angle = 2.0 * std::numbers::pi * c / k;
        const double cx = radius * std::cos(angle), cy = radius * std::sin(angle);
        for (int i = 0; i < per_class; ++i) {
            imclass::Example e;
            e.features = {cx + sigma * gaussian(rng), cy + sigma * gaussian(rng)};
            e.label = c;
            e.id = id++;
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace synthetic
