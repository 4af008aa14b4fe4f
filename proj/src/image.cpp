#include "imclass/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imclass {

RasterImage::RasterImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be at least 1x1");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

RasterImage RasterImage::crop(int left, int top, int width, int height) const {
    if (left < 0 || top < 0 || width < 1 || height < 1 ||
        left + width > width_ || top + height > height_)
        throw std::invalid_argument("crop rectangle out of bounds");
    RasterImage out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = at(left + x, top + y);
    return out;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be at least 1x1");
    tones_.assign(static_cast<std::size_t>(width) * height, fill);
}

std::vector<double> GrayImage::as_real() const {
    return std::vector<double>(tones_.begin(), tones_.end());
}

Hsv rgb_to_hsv(int r, int g, int b) {
    const double rf = r / 255.0, gf = g / 255.0, bf = b / 255.0;
    const double mx = std::max({rf, gf, bf});
    const double mn = std::min({rf, gf, bf});
    const double delta = mx - mn;

    Hsv out;
    out.v = mx;
    out.s = mx > 0 ? delta / mx : 0.0;
    if (delta > 0) {
        double h;
        if (mx == rf)
            h = std::fmod((gf - bf) / delta, 6.0);
        else if (mx == gf)
            h = (bf - rf) / delta + 2.0;
        else
            h = (rf - gf) / delta + 4.0;
        h *= 60.0;
        if (h < 0) h += 360.0;
        out.h = h < 360.0 ? h : 0.0;
    }
    return out;
}

static double clamp255(double v) { return std::clamp(v, 0.0, 255.0); }

Yuv rgb_to_yuv(int r, int g, int b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    const double u = 0.492 * (b - y) + 128.0;
    const double v = 0.877 * (r - y) + 128.0;
    return {clamp255(y), clamp255(u), clamp255(v)};
}

GrayImage to_gray(const RasterImage& img) {
    GrayImage out(img.width(), img.height());
    const auto& src = img.pixels();
    auto& dst = out.tones();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double y = 0.299 * src[i].r + 0.587 * src[i].g + 0.114 * src[i].b;
        dst[i] = static_cast<std::uint8_t>(std::lround(clamp255(y)));
    }
    return out;
}

int quantize_hsv(double h, double s, double v) {
    const int hue_level = std::min(15, static_cast<int>(h / 22.5));
    const int sat_level = std::min(3, static_cast<int>(s * 4.0));
    const int val_level = std::min(3, static_cast<int>(v * 4.0));
    return hue_level * 16 + sat_level * 4 + val_level;
}

int quantize_pixel(Rgb px) {
    const Hsv hsv = rgb_to_hsv(px.r, px.g, px.b);
    return quantize_hsv(hsv.h, hsv.s, hsv.v);
}

}  // namespace imclass
