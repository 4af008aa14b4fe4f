#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "imclass/descriptors.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace imclass;

TEST_CASE("zigzag visits a 5x5 matrix in the published order") {
    // Expected visit numbers laid out row-major.
    const int expected[5][5] = {{1, 3, 4, 10, 11},
                                {2, 5, 9, 12, 19},
                                {6, 8, 13, 18, 20},
                                {7, 14, 17, 21, 24},
                                {15, 16, 22, 23, 25}};
    const auto order = zigzag_positions(5);
    REQUIRE(order.size() == 25);
    int got[5][5] = {};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [col, row] = order[i];
        got[row][col] = static_cast<int>(i) + 1;
    }
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) REQUIRE(got[r][c] == expected[r][c]);
}

TEST_CASE("zigzag covers every entry exactly once for several sizes") {
    for (int n : {1, 2, 3, 8}) {
        const auto order = zigzag_positions(n);
        REQUIRE(order.size() == static_cast<std::size_t>(n) * n);
        std::vector<int> seen(order.size(), 0);
        for (const auto& [col, row] : order) {
            REQUIRE(col >= 0);
            REQUIRE(col < n);
            REQUIRE(row >= 0);
            REQUIRE(row < n);
            ++seen[static_cast<std::size_t>(row) * n + col];
        }
        for (int count : seen) REQUIRE(count == 1);
    }
}

TEST_CASE("subsample parameters") {
    SUBCASE("256x256 keeps full resolution") {
        const auto p = subsample_params(256, 256);
        CHECK(p.p == 0);
        CHECK(p.factor == 1);
        CHECK(p.extent == 8);
    }
    SUBCASE("512x512 drops every other row and column") {
        const auto p = subsample_params(512, 512);
        CHECK(p.p == 1);
        CHECK(p.factor == 2);
        CHECK(p.extent == 16);
    }
    SUBCASE("small images clamp at zero") {
        const auto p = subsample_params(64, 64);
        CHECK(p.p == 0);
        CHECK(p.factor == 1);
        CHECK(p.extent == 8);
    }
}

TEST_CASE("scalable color histogram") {
    SUBCASE("all black concentrates in bin 0") {
        const auto hist = scalable_color(synthetic::flat_image(16, 16, {0, 0, 0}));
        CHECK(hist[0] == 1.0);
        for (std::size_t b = 1; b < hist.size(); ++b) REQUIRE(hist[b] == 0.0);
    }
    SUBCASE("half red half black splits between bins 15 and 0") {
        RasterImage img(16, 16, {0, 0, 0});
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 8; ++x) img.at(x, y) = {255, 0, 0};
        const auto hist = scalable_color(img);
        CHECK(hist[0] == doctest::Approx(0.5));
        CHECK(hist[15] == doctest::Approx(0.5));  // pure red: hue 0, s = v = 1
        double sum = std::accumulate(hist.begin(), hist.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0));
    }
    SUBCASE("random image normalizes to 1") {
        const auto hist = scalable_color(synthetic::random_rgb(33, 21, 4));
        CHECK(std::accumulate(hist.begin(), hist.end(), 0.0) == doctest::Approx(1.0));
    }
}

TEST_CASE("color structure presence counting") {
    SUBCASE("all black image has a saturated black bin") {
        const auto hist = color_structure(synthetic::flat_image(16, 16, {0, 0, 0}));
        CHECK(hist[0] == 1.0);
        for (std::size_t b = 1; b < hist.size(); ++b) REQUIRE(hist[b] == 0.0);
    }
    SUBCASE("a single window counts both colors fully") {
        RasterImage img(8, 8, {0, 0, 0});
        img.at(3, 3) = {255, 0, 0};
        const auto hist = color_structure(img);
        CHECK(hist[0] == 1.0);
        CHECK(hist[15] == 1.0);
    }
    SUBCASE("too-small images are rejected") {
        CHECK_THROWS_WITH(color_structure(synthetic::flat_image(7, 12, {0, 0, 0})),
                          "image too small for color structure");
    }
    SUBCASE("clustered vs scattered black: equal histogram, different structure") {
        // Same number of black pixels in one blob vs four spread-out blobs.
        RasterImage one(64, 64, {255, 255, 255});
        synthetic::draw_disk(one, 32, 32, 5, {0, 0, 0});      // 21 pixels
        RasterImage four(64, 64, {255, 255, 255});
        for (auto [cx, cy] : {std::pair{16, 16}, {48, 16}, {16, 48}, {48, 48}})
            synthetic::draw_disk(four, cx, cy, 1, {0, 0, 0});  // 4 x 5 pixels
        four.at(17, 17) = {0, 0, 0};                           // equalize the areas

        const auto hist_one = scalable_color(one);
        const auto hist_four = scalable_color(four);
        for (std::size_t b = 0; b < hist_one.size(); ++b)
            REQUIRE(std::abs(hist_one[b] - hist_four[b]) < 1e-12);

        const auto cs_one = color_structure(one);
        const auto cs_four = color_structure(four);
        CHECK(std::abs(cs_one[0] - cs_four[0]) > 0.05);
        CHECK(cs_four[0] > cs_one[0]);  // scattered black reaches more windows
    }
    SUBCASE("replacement subsampling keeps pixel (K*i, K*j)") {
        // 512x256 triggers K = 2. A cell-1 checkerboard has one color on all
        // even-sum coordinates, so the subsampled grid is single-colored and
        // the window counting sees only that color; the plain histogram
        // still splits 50/50.
        const RasterImage img =
            synthetic::checkerboard_rgb(512, 256, 1, {0, 0, 0}, {255, 255, 255});
        REQUIRE(subsample_params(512, 256).factor == 2);
        const auto cs = color_structure(img);
        CHECK(cs[0] == 1.0);                       // black bin
        CHECK(cs[3] == 0.0);                       // white bin: h=0, s=0, v=1
        const auto sc = scalable_color(img);
        CHECK(sc[0] == doctest::Approx(0.5));
        CHECK(sc[3] == doctest::Approx(0.5));
    }
    SUBCASE("histogram is nearly invariant under 2x upscaling") {
        const RasterImage base = synthetic::checkerboard_rgb(32, 32, 4, {200, 30, 40}, {20, 20, 180});
        RasterImage doubled(64, 64);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) doubled.at(x, y) = base.at(x / 2, y / 2);
        const auto a = color_structure(base);
        const auto b = color_structure(doubled);
        for (std::size_t bin = 0; bin < a.size(); ++bin)
            REQUIRE(std::abs(a[bin] - b[bin]) < 0.02);
        const auto sa = scalable_color(base);
        const auto sb = scalable_color(doubled);
        for (std::size_t bin = 0; bin < sa.size(); ++bin)
            REQUIRE(std::abs(sa[bin] - sb[bin]) < 0.02);
    }
}

TEST_CASE("color layout") {
    SUBCASE("constant image keeps only the three DC terms") {
        const auto coeffs = color_layout(synthetic::flat_image(24, 24, {120, 60, 200}));
        REQUIRE(coeffs.size() == 20);
        CHECK(coeffs[0] != 0.0);   // Y DC
        CHECK(coeffs[10] != 0.0);  // U DC
        CHECK(coeffs[15] != 0.0);  // V DC
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (i != 0 && i != 10 && i != 15) REQUIRE(std::abs(coeffs[i]) < 1e-9);
    }
    SUBCASE("left-white right-black excites horizontal frequencies only") {
        RasterImage img(32, 32, {0, 0, 0});
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 16; ++x) img.at(x, y) = {255, 255, 255};
        const auto coeffs = color_layout(img);
        // Zigzag positions: 0 -> (kx=0,ky=0), 1 -> (0,1) vertical, 2 -> (1,0)
        // horizontal.
        CHECK(coeffs[0] != 0.0);
        CHECK(std::abs(coeffs[1]) < 1e-9);
        CHECK(std::abs(coeffs[2]) > 1.0);

        // Cross-check the Y block against the direct DCT-II oracle.
        std::array<double, 64> block{};
        for (int by = 0; by < 8; ++by)
            for (int bx = 0; bx < 8; ++bx) {
                double sum = 0.0;
                for (int y = by * 4; y < by * 4 + 4; ++y)
                    for (int x = bx * 4; x < bx * 4 + 4; ++x) {
                        const Rgb px = img.at(x, y);
                        sum += rgb_to_yuv(px.r, px.g, px.b).y;
                    }
                block[static_cast<std::size_t>(by) * 8 + bx] = sum / 16.0;
            }
        const auto dct = oracles::naive_dct8(block);
        const auto order = zigzag_positions(8);
        for (int i = 0; i < 10; ++i) {
            const auto [kx, ky] = order[static_cast<std::size_t>(i)];
            REQUIRE(coeffs[static_cast<std::size_t>(i)] ==
                    doctest::Approx(dct[static_cast<std::size_t>(ky) * 8 + kx]).epsilon(1e-9));
        }
    }
    SUBCASE("row and column duplication leaves the descriptor unchanged") {
        const RasterImage base = synthetic::random_rgb(24, 16, 99);
        RasterImage doubled(48, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 48; ++x) doubled.at(x, y) = base.at(x / 2, y / 2);
        const auto a = color_layout(base);
        const auto b = color_layout(doubled);
        for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
    }
    SUBCASE("too-small images are rejected") {
        CHECK_THROWS(color_layout(synthetic::flat_image(7, 8, {0, 0, 0})));
    }
}

TEST_CASE("homogeneous texture") {
    const GaborBankConfig cfg;
    SUBCASE("constant image has zero magnitude spread") {
        const GrayImage img(96, 96, 130);
        const auto feats = homogeneous_texture(img, cfg);
        REQUIRE(feats.size() == 60);
        for (std::size_t i = 1; i < feats.size(); i += 2) REQUIRE(std::abs(feats[i]) < 1e-9);
    }
    SUBCASE("grating at u_hi lights up the matching orientation at scale 0") {
        const GrayImage img = synthetic::grating(96, 96, cfg.u_hi);
        const auto feats = homogeneous_texture(img, cfg);
        const auto mean_of = [&](int m, int n) {
            return feats[2 * (static_cast<std::size_t>(m) * cfg.orientations + n)];
        };
        for (int n = 1; n < cfg.orientations; ++n) REQUIRE(mean_of(0, 0) > mean_of(0, n));
    }
    SUBCASE("kernels clamp to small images instead of failing") {
        const GrayImage img(64, 64, 10);
        const auto feats = homogeneous_texture(img, cfg);
        REQUIRE(feats.size() == 60);
        for (double v : feats) REQUIRE(std::isfinite(v));
    }
}

TEST_CASE("visual texture vector") {
    const NgtdmConfig ncfg;
    const auto v = visual_texture(synthetic::checkerboard(32, 32, 2, 40, 200), ncfg);
    REQUIRE(v.size() == 5);
    for (double x : v) REQUIRE(std::isfinite(x));
    CHECK(v[0] > 0.0);  // coarseness
    CHECK(v[1] > 0.0);  // contrast
}

TEST_CASE("feature layout and extract_all") {
    const GaborBankConfig gcfg;
    const NgtdmConfig ncfg;
    const FeatureLayout layout = feature_layout(gcfg, ncfg);
    CHECK(layout.total() == 256 + 256 + 20 + 60 + 5);
    CHECK(layout.describe() ==
          "scalable_color:256 color_structure:256 color_layout:20 homogeneous_texture:60 "
          "visual_texture:5");

    SUBCASE("deterministic and finite on a 139x139 random image") {
        const RasterImage img = synthetic::random_rgb(139, 139, 7);
        const auto once = extract_all(img, gcfg, ncfg);
        const auto twice = extract_all(img, gcfg, ncfg);
        REQUIRE(once.size() == static_cast<std::size_t>(layout.total()));
        for (std::size_t i = 0; i < once.size(); ++i) {
            REQUIRE(std::isfinite(once[i]));
            REQUIRE(once[i] == twice[i]);
        }
    }
    SUBCASE("all-black 64x64 composes the degenerate cases") {
        const auto v = extract_all(synthetic::flat_image(64, 64, {0, 0, 0}), gcfg, ncfg);
        CHECK(v[0] == 1.0);                       // scalable color bin 0
        CHECK(v[256] == 1.0);                     // color structure bin 0
        const std::size_t vt = 256 + 256 + 20 + 60;
        CHECK(v[vt + 0] == doctest::Approx(1.0 / ncfg.epsilon));  // coarseness
        CHECK(v[vt + 1] == 0.0);                                  // contrast
        CHECK(v[vt + 2] == 0.0);                                  // busyness
    }
    SUBCASE("errors carry the failing descriptor's name") {
        try {
            extract_all(synthetic::flat_image(6, 6, {0, 0, 0}), gcfg, ncfg);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("color_structure") != std::string::npos);
        }
    }
}
