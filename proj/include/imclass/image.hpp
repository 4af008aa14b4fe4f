#pragma once

#include <cstdint>
#include <vector>

namespace imclass {

// Largest gray tone; tone grids are quantized to [0, kMaxTone].
inline constexpr int kMaxTone = 255;
// Number of bins produced by the shared HSV color quantizer.
inline constexpr int kColorBins = 256;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

// Owning row-major RGB pixel grid, 8 bits per channel, no alpha.
class RasterImage {
public:
    RasterImage(int width, int height, Rgb fill = {});

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    std::vector<Rgb>& pixels() { return pixels_; }
    const std::vector<Rgb>& pixels() const { return pixels_; }

    RasterImage crop(int left, int top, int width, int height) const;

private:
    int width_;
    int height_;
    std::vector<Rgb> pixels_;
};

// Row-major grid of gray tones in [0, kMaxTone].
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t& tone(int x, int y) { return tones_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t tone(int x, int y) const { return tones_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<std::uint8_t>& tones() const { return tones_; }
    std::vector<std::uint8_t>& tones() { return tones_; }

    // The tone grid as doubles, row-major, for signal-processing consumers.
    std::vector<double> as_real() const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> tones_;
};

struct Hsv {
    double h = 0;  // degrees, [0, 360)
    double s = 0;  // [0, 1]
    double v = 0;  // [0, 1]
};

struct Yuv {
    double y = 0;  // [0, 255]
    double u = 0;  // centered at 128
    double v = 0;  // centered at 128
};

// Hexcone HSV; s = 0 when v = 0, hue 0 for achromatic input.
Hsv rgb_to_hsv(int r, int g, int b);

// BT.601 luma with U = 0.492(B-Y)+128, V = 0.877(R-Y)+128, clamped to [0,255].
Yuv rgb_to_yuv(int r, int g, int b);

// Pixelwise rounded BT.601 luma.
GrayImage to_gray(const RasterImage& img);

// Uniform 16x4x4 HSV quantizer; inputs exactly at the top of a range fall in
// the last level. Returns a bin in [0, kColorBins).
int quantize_hsv(double h, double s, double v);

// quantize_hsv applied to a pixel.
int quantize_pixel(Rgb px);

}  // namespace imclass
