#pragma once

#include <string>
#include <utility>
#include <vector>

#include "imclass/gabor.hpp"
#include "imclass/image.hpp"
#include "imclass/ngtdm.hpp"

namespace imclass {

// Diagonal scan over a length x length matrix, visiting entries from low to
// high frequency. current() yields (column, row).
class ZigzagScan {
public:
    explicit ZigzagScan(int length);

    std::pair<int, int> current() const { return {x_, y_}; }
    void next();

private:
    int length_;
    int x_ = 0;
    int y_ = 0;
    bool forward_ = true;
};

// The full scan order as (column, row) pairs.
std::vector<std::pair<int, int>> zigzag_positions(int length);

struct SubsampleParams {
    int p = 0;       // power so that factor = 2^p
    int factor = 1;  // replacement subsampling step K
    int extent = 8;  // structuring element side E = 8K
};

// Structuring-element parameters from the image size.
SubsampleParams subsample_params(int w, int h);

// 256-bin relative-frequency histogram over the quantized HSV space.
std::vector<double> scalable_color(const RasterImage& img);

// Per-window color presence counts: an 8x8 element slides over the
// (replacement-subsampled) image and each color present in a window adds one.
// Normalized by the number of window positions.
std::vector<double> color_structure(const RasterImage& img);

// Low-frequency DCT coefficients of the 8x8 block-mean image: 10 from Y and
// 5 each from U and V, in zigzag order.
std::vector<double> color_layout(const RasterImage& img);

// Mean and standard deviation of the response magnitude for every filter in
// the bank, scale-major, 2 * S * K_o values. Kernels that would not fit the
// image are truncated to its smaller side.
std::vector<double> homogeneous_texture(const GrayImage& img, const GaborBankConfig& cfg);

// The five NGTDM measures: coarseness, contrast, busyness, complexity,
// strength.
std::vector<double> visual_texture(const GrayImage& img, const NgtdmConfig& cfg);

struct FeatureLayout {
    std::vector<std::pair<std::string, int>> segments;

    int total() const;
    std::string describe() const;  // "name:len name:len ..."
};

FeatureLayout feature_layout(const GaborBankConfig& gcfg, const NgtdmConfig& ncfg);

// All descriptor families concatenated per feature_layout(). Deterministic:
// the same image yields the identical vector.
std::vector<double> extract_all(const RasterImage& img, const GaborBankConfig& gcfg,
                                const NgtdmConfig& ncfg);

}  // namespace imclass
