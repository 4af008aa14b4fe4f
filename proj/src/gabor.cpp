#include "imclass/gabor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imclass {

namespace {
constexpr double kTwoLn2 = 2.0 * std::numbers::ln2;
}

GaborParams derive_gabor_params(const GaborBankConfig& cfg) {
    if (!(cfg.u_lo > 0.0) || !(cfg.u_hi > cfg.u_lo) || !(cfg.u_hi < 0.5))
        throw std::invalid_argument("gabor bank requires 0 < u_lo < u_hi < 0.5");
    if (cfg.scales < 2 || cfg.orientations < 1)
        throw std::invalid_argument("gabor bank requires scales >= 2 and orientations >= 1");

    GaborParams p;
    p.a = std::pow(cfg.u_hi / cfg.u_lo, 1.0 / (cfg.scales - 1));
    p.sigma_u = (p.a - 1.0) * cfg.u_hi / ((p.a + 1.0) * std::sqrt(kTwoLn2));

    const double bracket1 = cfg.u_hi - kTwoLn2 * (p.sigma_u * p.sigma_u / cfg.u_hi);
    const double bracket2 = kTwoLn2 - std::pow(kTwoLn2 * p.sigma_u / cfg.u_hi, 2.0);
    if (bracket1 <= 0.0 || bracket2 <= 0.0)
        throw std::invalid_argument("gabor bank config yields a non-positive sigma_v");
    p.sigma_v = std::tan(std::numbers::pi / (2.0 * cfg.orientations)) * bracket1 * std::sqrt(bracket2);

    p.sigma_x = 1.0 / (2.0 * std::numbers::pi * p.sigma_u);
    p.sigma_y = 1.0 / (2.0 * std::numbers::pi * p.sigma_v);
    return p;
}

int gabor_kernel_size(const GaborParams& p, int scale) {
    const double reach = 4.0 * p.sigma_x * std::pow(p.a, scale);
    int size = 2 * static_cast<int>(std::ceil(reach)) + 1;
    return std::min(size, kMaxGaborKernelSize);
}

namespace {

Kernel2D make_kernel(const GaborBankConfig& cfg, const GaborParams& p, int m, int n, int size_cap) {
    int size = gabor_kernel_size(p, m);
    if (size > size_cap) size = size_cap % 2 == 1 ? size_cap : size_cap - 1;

    const double theta = n * std::numbers::pi / cfg.orientations;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double inv_scale = std::pow(p.a, -m);
    const double norm = inv_scale / (2.0 * std::numbers::pi * p.sigma_x * p.sigma_y);

    Kernel2D k(size);
    const int c = k.center();
    for (int y = -c; y <= c; ++y) {
        for (int x = -c; x <= c; ++x) {
            const double xr = inv_scale * (x * ct + y * st);
            const double yr = inv_scale * (-x * st + y * ct);
            const double env = norm * std::exp(-0.5 * (xr * xr / (p.sigma_x * p.sigma_x) +
                                                       yr * yr / (p.sigma_y * p.sigma_y)));
            const double phase = 2.0 * std::numbers::pi * cfg.u_hi * xr;
            k.at(x + c, y + c) = {env * std::cos(phase), env * std::sin(phase)};
        }
    }
    return k;
}

}  // namespace

std::vector<GaborFilter> gabor_bank(const GaborBankConfig& cfg, int size_cap) {
    const GaborParams p = derive_gabor_params(cfg);
    if (size_cap < 1)
        throw std::invalid_argument("gabor kernel size cap must be positive");
    std::vector<GaborFilter> bank;
    bank.reserve(static_cast<std::size_t>(cfg.scales) * cfg.orientations);
    for (int m = 0; m < cfg.scales; ++m)
        for (int n = 0; n < cfg.orientations; ++n)
            bank.push_back({m, n, make_kernel(cfg, p, m, n, size_cap)});
    return bank;
}

double gabor_sigma_over_lambda(double octaves) {
    const double pow2 = std::pow(2.0, octaves);
    return std::sqrt(std::numbers::ln2 / 2.0) / std::numbers::pi * (pow2 + 1.0) / (pow2 - 1.0);
}

}  // namespace imclass
