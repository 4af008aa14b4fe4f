#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "imclass/image.hpp"

namespace imclass {

struct NgtdmConfig {
    int d = 1;               // neighborhood radius in pixels
    double epsilon = 1e-8;   // guards divisions in the texture measures
};

// Per-tone accumulated deviation from the neighborhood mean, computed over
// the image interior (a margin of width d is excluded).
struct Ngtdm {
    std::array<double, kMaxTone + 1> s{};  // s(i)
    std::array<double, kMaxTone + 1> p{};  // relative tone frequencies
    int present_tones = 0;                 // N_g
    std::int64_t interior_count = 0;       // n = (w-2d)(h-2d)
};

// Neighborhood means over the interior, (w-2d) x (h-2d) row-major. Uses the
// left/above running-sum recurrences, O(d) per pixel, integer-exact.
std::vector<double> ngtdm_abar_grid(const GrayImage& img, int d);

Ngtdm ngtdm(const GrayImage& img, const NgtdmConfig& cfg);

double coarseness(const Ngtdm& n, const NgtdmConfig& cfg);
double contrast(const Ngtdm& n, const NgtdmConfig& cfg);
double busyness(const Ngtdm& n, const NgtdmConfig& cfg);
double complexity(const Ngtdm& n, const NgtdmConfig& cfg);
double strength(const Ngtdm& n, const NgtdmConfig& cfg);

}  // namespace imclass
