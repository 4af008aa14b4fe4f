#include "imclass/ngtdm.hpp"

#include <cmath>
#include <stdexcept>

namespace imclass {

namespace {

void check_config(const GrayImage& img, int d) {
    if (d < 1) throw std::invalid_argument("NGTDM radius d must be >= 1");
    if (img.width() - 2 * d < 1 || img.height() - 2 * d < 1)
        throw std::invalid_argument("image too small for NGTDM radius d");
}

}  // namespace

std::vector<double> ngtdm_abar_grid(const GrayImage& img, int d) {
    check_config(img, d);
    const int w = img.width(), h = img.height();
    const int iw = w - 2 * d, ih = h - 2 * d;
    const int window = (2 * d + 1) * (2 * d + 1);

    // Running window sums including the center tap, kept in integers.
    std::vector<std::int64_t> acc(static_cast<std::size_t>(iw) * ih);
    for (int iy = 0; iy < ih; ++iy) {
        const int l = iy + d;
        for (int ix = 0; ix < iw; ++ix) {
            const int k = ix + d;
            std::int64_t sum = 0;
            if (ix == 0 && iy == 0) {
                for (int m = -d; m <= d; ++m)
                    for (int n = -d; n <= d; ++n)
                        sum += img.tone(k + m, l + n);
            } else if (ix == 0) {
                sum = acc[static_cast<std::size_t>(iy - 1) * iw];
                for (int m = -d; m <= d; ++m)
                    sum += img.tone(k + m, l + d) - img.tone(k + m, l - d - 1);
            } else {
                sum = acc[static_cast<std::size_t>(iy) * iw + ix - 1];
                for (int n = -d; n <= d; ++n)
                    sum += img.tone(k + d, l + n) - img.tone(k - d - 1, l + n);
            }
            acc[static_cast<std::size_t>(iy) * iw + ix] = sum;
        }
    }

    std::vector<double> abar(acc.size());
    for (int iy = 0; iy < ih; ++iy)
        for (int ix = 0; ix < iw; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * iw + ix;
            abar[idx] = static_cast<double>(acc[idx] - img.tone(ix + d, iy + d)) / (window - 1);
        }
    return abar;
}

Ngtdm ngtdm(const GrayImage& img, const NgtdmConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("NGTDM epsilon must be positive");
    check_config(img, cfg.d);
    const int d = cfg.d;
    const int iw = img.width() - 2 * d, ih = img.height() - 2 * d;
    const std::vector<double> abar = ngtdm_abar_grid(img, d);

    Ngtdm out;
    out.interior_count = static_cast<std::int64_t>(iw) * ih;
    std::array<std::int64_t, kMaxTone + 1> counts{};
    for (int iy = 0; iy < ih; ++iy)
        for (int ix = 0; ix < iw; ++ix) {
            const int tone = img.tone(ix + d, iy + d);
            out.s[tone] += std::abs(tone - abar[static_cast<std::size_t>(iy) * iw + ix]);
            ++counts[tone];
        }
    for (int i = 0; i <= kMaxTone; ++i) {
        out.p[i] = static_cast<double>(counts[i]) / static_cast<double>(out.interior_count);
        if (counts[i] > 0) ++out.present_tones;
    }
    return out;
}

double coarseness(const Ngtdm& n, const NgtdmConfig& cfg) {
    double weighted = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) weighted += n.p[i] * n.s[i];
    return 1.0 / (cfg.epsilon + weighted);
}

double contrast(const Ngtdm& n, const NgtdmConfig&) {
    if (n.present_tones < 2) return 0.0;
    double spread = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) {
        if (n.p[i] == 0.0) continue;
        for (int j = 0; j <= kMaxTone; ++j) {
            if (n.p[j] == 0.0) continue;
            const double diff = i - j;
            spread += n.p[i] * n.p[j] * diff * diff;
        }
    }
    spread /= static_cast<double>(n.present_tones) * (n.present_tones - 1);
    double local = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) local += n.s[i];
    local /= static_cast<double>(n.interior_count);
    return spread * local;
}

double busyness(const Ngtdm& n, const NgtdmConfig&) {
    double num = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) num += n.p[i] * n.s[i];
    double den = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) {
        if (n.p[i] == 0.0) continue;
        for (int j = i; j <= kMaxTone; ++j) {
            if (n.p[j] == 0.0) continue;
            den += std::abs(i * n.p[i] - j * n.p[j]);
        }
    }
    if (den == 0.0) return 0.0;  // single-tone image; numerator is 0 as well
    return num / den;
}

double complexity(const Ngtdm& n, const NgtdmConfig&) {
    double sum = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) {
        for (int j = 0; j <= kMaxTone; ++j) {
            const double psum = n.p[i] + n.p[j];
            if (psum == 0.0) continue;
            sum += std::abs(i - j) / (static_cast<double>(n.interior_count) * psum) *
                   (n.p[i] * n.s[i] + n.p[j] * n.s[j]);
        }
    }
    return sum;
}

double strength(const Ngtdm& n, const NgtdmConfig& cfg) {
    double num = 0.0;
    for (int i = 0; i <= kMaxTone; ++i) {
        if (n.p[i] == 0.0) continue;
        for (int j = 0; j <= kMaxTone; ++j) {
            if (n.p[j] == 0.0) continue;
            const double diff = i - j;
            num += (n.p[i] + n.p[j]) * diff * diff;
        }
    }
    double den = cfg.epsilon;
    for (int i = 0; i <= kMaxTone; ++i) den += n.s[i];
    return num / den;
}

}  // namespace imclass
