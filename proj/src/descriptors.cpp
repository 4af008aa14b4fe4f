#include "imclass/descriptors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "imclass/convolution.hpp"

namespace imclass {

ZigzagScan::ZigzagScan(int length) : length_(length) {
    if (length < 1) throw std::invalid_argument("zigzag length must be positive");
}

void ZigzagScan::next() {
    if (forward_) {
        if (y_ < length_ - 1) {
            ++y_;
            --x_;
            if (x_ < 0) {
                x_ = 0;
                forward_ = false;
            }
        } else {
            ++x_;
            forward_ = false;
        }
    } else {
        if (x_ < length_ - 1) {
            ++x_;
            --y_;
            if (y_ < 0) {
                y_ = 0;
                forward_ = true;
            }
        } else {
            ++y_;
            forward_ = true;
        }
    }
}

std::vector<std::pair<int, int>> zigzag_positions(int length) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(length) * length);
    ZigzagScan scan(length);
    for (int i = 0; i < length * length; ++i) {
        out.push_back(scan.current());
        scan.next();
    }
    return out;
}

SubsampleParams subsample_params(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be positive");
    const double raw = 0.5 * std::log2(static_cast<double>(w) * h) - 8.0;
    SubsampleParams out;
    out.p = std::max(0, static_cast<int>(std::round(raw)));
    out.factor = 1 << out.p;
    out.extent = 8 * out.factor;
    return out;
}

std::vector<double> scalable_color(const RasterImage& img) {
    std::vector<double> hist(kColorBins, 0.0);
    for (const Rgb& px : img.pixels()) hist[quantize_pixel(px)] += 1.0;
    const double total = static_cast<double>(img.pixels().size());
    for (double& v : hist) v /= total;
    return hist;
}

std::vector<double> color_structure(const RasterImage& img) {
    const SubsampleParams sub = subsample_params(img.width(), img.height());
    const int k = sub.factor;
    const int ws = (img.width() - 1) / k + 1;
    const int hs = (img.height() - 1) / k + 1;
    if (ws < 8 || hs < 8) throw std::invalid_argument("image too small for color structure");

    std::vector<int> bins(static_cast<std::size_t>(ws) * hs);
    for (int y = 0; y < hs; ++y)
        for (int x = 0; x < ws; ++x)
            bins[static_cast<std::size_t>(y) * ws + x] = quantize_pixel(img.at(x * k, y * k));

    std::vector<double> hist(kColorBins, 0.0);
    std::array<std::uint32_t, kColorBins> seen{};
    std::uint32_t stamp = 0;
    for (int wy = 0; wy + 8 <= hs; ++wy) {
        for (int wx = 0; wx + 8 <= ws; ++wx) {
            ++stamp;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const int bin = bins[static_cast<std::size_t>(wy + y) * ws + wx + x];
                    if (seen[bin] != stamp) {
                        seen[bin] = stamp;
                        hist[bin] += 1.0;
                    }
                }
        }
    }
    const double windows = static_cast<double>(hs - 7) * (ws - 7);
    for (double& v : hist) v /= windows;
    return hist;
}

namespace {

// Orthonormal 2D DCT-II of an 8x8 block.
void dct8x8(const std::array<double, 64>& in, std::array<double, 64>& out) {
    static const auto basis = [] {
        std::array<double, 64> t{};
        for (int k = 0; k < 8; ++k) {
            const double c = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int n = 0; n < 8; ++n)
                t[static_cast<std::size_t>(k) * 8 + n] =
                    c * std::cos(std::numbers::pi * (n + 0.5) * k / 8.0);
        }
        return t;
    }();

    std::array<double, 64> tmp{};
    for (int k = 0; k < 8; ++k)  // rows
        for (int y = 0; y < 8; ++y) {
            double acc = 0.0;
            for (int n = 0; n < 8; ++n) acc += basis[k * 8 + n] * in[y * 8 + n];
            tmp[static_cast<std::size_t>(y) * 8 + k] = acc;
        }
    for (int k = 0; k < 8; ++k)  // columns
        for (int x = 0; x < 8; ++x) {
            double acc = 0.0;
            for (int n = 0; n < 8; ++n) acc += basis[k * 8 + n] * tmp[n * 8 + x];
            out[static_cast<std::size_t>(k) * 8 + x] = acc;
        }
}

}  // namespace

std::vector<double> color_layout(const RasterImage& img) {
    const int w = img.width(), h = img.height();
    if (w < 8 || h < 8) throw std::invalid_argument("image too small for color layout");

    // Interpolation subsampling: each of the 8x8 blocks is represented by its
    // mean color.
    std::array<double, 64> ymean{}, umean{}, vmean{};
    for (int by = 0; by < 8; ++by) {
        const int y0 = by * h / 8, y1 = (by + 1) * h / 8;
        for (int bx = 0; bx < 8; ++bx) {
            const int x0 = bx * w / 8, x1 = (bx + 1) * w / 8;
            double ys = 0, us = 0, vs = 0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    const Rgb px = img.at(x, y);
                    const Yuv yuv = rgb_to_yuv(px.r, px.g, px.b);
                    ys += yuv.y;
                    us += yuv.u;
                    vs += yuv.v;
                }
            const double count = static_cast<double>(y1 - y0) * (x1 - x0);
            const std::size_t idx = static_cast<std::size_t>(by) * 8 + bx;
            ymean[idx] = ys / count;
            umean[idx] = us / count;
            vmean[idx] = vs / count;
        }
    }

    std::array<double, 64> coef{};
    const auto order = zigzag_positions(8);
    std::vector<double> out;
    out.reserve(20);
    const auto emit = [&](const std::array<double, 64>& block, int count) {
        dct8x8(block, coef);
        for (int i = 0; i < count; ++i) {
            const auto [cx, cy] = order[i];
            out.push_back(coef[static_cast<std::size_t>(cy) * 8 + cx]);
        }
    };
    emit(ymean, 10);
    emit(umean, 5);
    emit(vmean, 5);
    return out;
}

std::vector<double> homogeneous_texture(const GrayImage& img, const GaborBankConfig& cfg) {
    const int min_side = std::min(img.width(), img.height());
    int cap = std::min(kMaxGaborKernelSize, min_side);
    if (cap % 2 == 0) --cap;
    if (cap < 1) throw std::invalid_argument("image too small for homogeneous texture");

    const std::vector<double> grid = img.as_real();
    const std::vector<GaborFilter> bank = gabor_bank(cfg, cap);

    std::vector<double> out;
    out.reserve(bank.size() * 2);
    for (const GaborFilter& f : bank) {
        const ComplexGrid resp = convolve_fft(grid, img.width(), img.height(), f.kernel);
        double mean = 0.0;
        for (const auto& v : resp.values) mean += std::abs(v);
        mean /= static_cast<double>(resp.values.size());
        double var = 0.0;
        for (const auto& v : resp.values) {
            const double d = std::abs(v) - mean;
            var += d * d;
        }
        var /= static_cast<double>(resp.values.size());
        out.push_back(mean);
        out.push_back(std::sqrt(var));
    }
    return out;
}

std::vector<double> visual_texture(const GrayImage& img, const NgtdmConfig& cfg) {
    const Ngtdm n = ngtdm(img, cfg);
    return {coarseness(n, cfg), contrast(n, cfg), busyness(n, cfg), complexity(n, cfg),
            strength(n, cfg)};
}

int FeatureLayout::total() const {
    int sum = 0;
    for (const auto& [name, len] : segments) sum += len;
    return sum;
}

std::string FeatureLayout::describe() const {
    std::string out;
    for (const auto& [name, len] : segments) {
        if (!out.empty()) out += ' ';
        out += name + ':' + std::to_string(len);
    }
    return out;
}

FeatureLayout feature_layout(const GaborBankConfig& gcfg, const NgtdmConfig&) {
    FeatureLayout layout;
    layout.segments = {
        {"scalable_color", kColorBins},
        {"color_structure", kColorBins},
        {"color_layout", 20},
        {"homogeneous_texture", 2 * gcfg.scales * gcfg.orientations},
        {"visual_texture", 5},
    };
    return layout;
}

std::vector<double> extract_all(const RasterImage& img, const GaborBankConfig& gcfg,
                                const NgtdmConfig& ncfg) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(feature_layout(gcfg, ncfg).total()));
    const auto append = [&](const char* name, auto&& compute) {
        std::vector<double> part;
        try {
            part = compute();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(name) + ": " + e.what());
        }
        for (double v : part)
            if (!std::isfinite(v))
                throw std::runtime_error(std::string(name) + ": non-finite feature value");
        out.insert(out.end(), part.begin(), part.end());
    };
    append("scalable_color", [&] { return scalable_color(img); });
    append("color_structure", [&] { return color_structure(img); });
    append("color_layout", [&] { return color_layout(img); });
    const GrayImage gray = to_gray(img);
    append("homogeneous_texture", [&] { return homogeneous_texture(gray, gcfg); });
    append("visual_texture", [&] { return visual_texture(gray, ncfg); });
    return out;
}

}  // namespace imclass
