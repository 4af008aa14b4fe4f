#pragma once

#include <vector>

#include "imclass/convolution.hpp"

namespace imclass {

// Taps further than 4*sigma_x from the center are dropped; kernels never
// exceed this side length.
inline constexpr int kMaxGaborKernelSize = 91;

struct GaborBankConfig {
    double u_lo = 0.05;      // lower center frequency, cycles/pixel
    double u_hi = 0.4;       // upper center frequency, cycles/pixel
    int scales = 5;          // S
    int orientations = 6;    // K_o
};

// Quantities shared by every filter in a bank.
struct GaborParams {
    double a = 0;        // scale factor between adjacent center frequencies
    double sigma_u = 0;  // frequency-domain widths
    double sigma_v = 0;
    double sigma_x = 0;  // space-domain widths, sigma_x = 1/(2 pi sigma_u)
    double sigma_y = 0;
};

struct GaborFilter {
    int scale = 0;        // m in [0, S)
    int orientation = 0;  // n in [0, K_o)
    Kernel2D kernel;
};

// Derives the half-peak bank parameters; throws on an invalid config.
GaborParams derive_gabor_params(const GaborBankConfig& cfg);

// Side length of the scale-m kernel before the size_cap is applied.
int gabor_kernel_size(const GaborParams& p, int scale);

// Builds the S * K_o complex kernels, scale-major. The filter is rotated
// rather than the image; size_cap further truncates kernels that would not
// fit a small target grid.
std::vector<GaborFilter> gabor_bank(const GaborBankConfig& cfg, int size_cap = kMaxGaborKernelSize);

// sigma/lambda ratio of a Gabor with the given half-amplitude bandwidth in
// octaves; about 0.5622 at one octave.
double gabor_sigma_over_lambda(double octaves);

}  // namespace imclass
