#pragma once

#include <complex>
#include <span>
#include <vector>

namespace imclass {

// Square complex-valued convolution kernel with odd side length.
class Kernel2D {
public:
    explicit Kernel2D(int size);

    int size() const { return size_; }
    int center() const { return size_ / 2; }

    std::complex<double>& at(int x, int y) { return taps_[static_cast<std::size_t>(y) * size_ + x]; }
    const std::complex<double>& at(int x, int y) const { return taps_[static_cast<std::size_t>(y) * size_ + x]; }

    const std::vector<std::complex<double>>& taps() const { return taps_; }

private:
    int size_;
    std::vector<std::complex<double>> taps_;
};

struct ComplexGrid {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> values;

    std::complex<double>& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    const std::complex<double>& at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Lays the kernel out in an out_h x out_w grid so its center tap sits at
// (0,0) and the quadrants wrap around to the opposite corners.
ComplexGrid wrap_kernel(const Kernel2D& kernel, int out_w, int out_h);

// Circular 2D convolution of a real row-major grid with the kernel via the
// convolution theorem. The delta kernel is the identity; works for any grid
// size, not just powers of two.
ComplexGrid convolve_fft(std::span<const double> grid, int w, int h, const Kernel2D& kernel);

}  // namespace imclass
