#include "imclass/convolution.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <new>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace imclass {

Kernel2D::Kernel2D(int size) : size_(size) {
    if (size < 1 || size % 2 == 0)
        throw std::invalid_argument("kernel size must be odd and positive");
    taps_.assign(static_cast<std::size_t>(size) * size, {0.0, 0.0});
}

ComplexGrid wrap_kernel(const Kernel2D& kernel, int out_w, int out_h) {
    const int ks = kernel.size();
    if (ks > out_w || ks > out_h)
        throw std::invalid_argument("kernel exceeds image");
    ComplexGrid out;
    out.width = out_w;
    out.height = out_h;
    out.values.assign(static_cast<std::size_t>(out_w) * out_h, {0.0, 0.0});
    const int c = kernel.center();
    for (int y = 0; y < ks; ++y) {
        const int oy = ((y - c) % out_h + out_h) % out_h;
        for (int x = 0; x < ks; ++x) {
            const int ox = ((x - c) % out_w + out_w) % out_w;
            out.at(ox, oy) = kernel.at(x, y);
        }
    }
    return out;
}

namespace {

// 64-byte-aligned complex buffer allocated outside FFTW, so only the
// planner ever touches non-thread-safe FFTW entry points.
struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) {
        const std::size_t bytes = (n * sizeof(fftw_complex) + 63) / 64 * 64;
        data = static_cast<fftw_complex*>(std::aligned_alloc(64, bytes));
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { std::free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    fftw_complex* data;
};

// FFTW planning is not thread-safe; plans are created once per (w, h,
// direction) under a lock and then executed on per-call arrays, which the
// new-array execute interface allows concurrently. Plan arrays and per-call
// arrays share the same alignment.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int w, int h, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(w, h, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const std::size_t n = static_cast<std::size_t>(w) * h;
        FftwBuffer in(n), out(n);
        fftw_plan plan = fftw_plan_dft_2d(h, w, in.data, out.data, sign, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("FFTW plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(fftw_plan plan, fftw_complex* in, fftw_complex* out) {
    fftw_execute_dft(plan, in, out);
}

}  // namespace

ComplexGrid convolve_fft(std::span<const double> grid, int w, int h, const Kernel2D& kernel) {
    if (w < 1 || h < 1 || grid.size() != static_cast<std::size_t>(w) * h)
        throw std::invalid_argument("grid dimensions do not match data");
    const ComplexGrid wrapped = wrap_kernel(kernel, w, h);

    const std::size_t n = static_cast<std::size_t>(w) * h;
    FftwBuffer a(n), b(n), c(n);

    fftw_plan fwd = PlanCache::instance().get(w, h, FFTW_FORWARD);
    fftw_plan bwd = PlanCache::instance().get(w, h, FFTW_BACKWARD);

    for (std::size_t i = 0; i < n; ++i) {
        a.data[i][0] = grid[i];
        a.data[i][1] = 0.0;
    }
    execute(fwd, a.data, b.data);

    for (std::size_t i = 0; i < n; ++i) {
        a.data[i][0] = wrapped.values[i].real();
        a.data[i][1] = wrapped.values[i].imag();
    }
    execute(fwd, a.data, c.data);

    // Elementwise product; inverse transform carries the 1/(w*h) factor.
    for (std::size_t i = 0; i < n; ++i) {
        const double re = b.data[i][0] * c.data[i][0] - b.data[i][1] * c.data[i][1];
        const double im = b.data[i][0] * c.data[i][1] + b.data[i][1] * c.data[i][0];
        a.data[i][0] = re;
        a.data[i][1] = im;
    }
    execute(bwd, a.data, b.data);

    ComplexGrid out;
    out.width = w;
    out.height = h;
    out.values.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = {b.data[i][0] * scale, b.data[i][1] * scale};
    return out;
}

}  // namespace imclass
