#include <doctest.h>

#include <random>
#include <vector>

#include "sled/errors.hpp"
#include "sled/superpixel.hpp"

using namespace sled;

namespace {

// Flood fill within one label; returns the number of reached pixels.
std::size_t flood_within_label(const SuperpixelLabeling& sp, int r0, int c0) {
    const int lbl = sp.label_at(r0, c0);
    std::vector<std::uint8_t> seen(sp.labels.size(), 0);
    std::vector<std::pair<int, int>> stack = {{r0, c0}};
    seen[static_cast<std::size_t>(r0) * sp.width + c0] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        ++reached;
        const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (auto& n : nb) {
            if (n[0] < 0 || n[0] >= sp.height || n[1] < 0 || n[1] >= sp.width) continue;
            std::size_t idx = static_cast<std::size_t>(n[0]) * sp.width + n[1];
            if (!seen[idx] && sp.labels[idx] == lbl) {
                seen[idx] = 1;
                stack.push_back({n[0], n[1]});
            }
        }
    }
    return reached;
}

} // namespace

TEST_CASE("constant image yields the exact seed grid") {
    RgbImage img = RgbImage::filled(200, 200, 0.5f, 0.5f, 0.5f);
    SuperpixelLabeling sp = slic_segment(img, 25);
    CHECK(sp.n_superpixels == 25);
    for (int size : sp.sizes) {
        CHECK(size >= 1200);  // 1600 +- 25%
        CHECK(size <= 2000);
    }
    for (const auto& mean : sp.means)
        for (double v : mean) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("slic adheres to a strong vertical boundary") {
    RgbImage img(100, 100);
    for (int r = 0; r < 100; ++r)
        for (int c = 0; c < 100; ++c) {
            float v = c < 50 ? 0.0f : 1.0f;
            img.px(r, c)[0] = img.px(r, c)[1] = img.px(r, c)[2] = v;
        }
    SuperpixelLabeling sp = slic_segment(img, 8);
    // No superpixel may straddle the boundary by more than a 2-px band.
    std::vector<int> min_col(sp.n_superpixels, 1000), max_col(sp.n_superpixels, -1);
    for (int r = 0; r < 100; ++r)
        for (int c = 0; c < 100; ++c) {
            int lbl = sp.label_at(r, c);
            min_col[lbl] = std::min(min_col[lbl], c);
            max_col[lbl] = std::max(max_col[lbl], c);
        }
    for (int lbl = 0; lbl < sp.n_superpixels; ++lbl) {
        bool left_side = max_col[lbl] <= 51;
        bool right_side = min_col[lbl] >= 48;
        CHECK((left_side || right_side));
    }
}

TEST_CASE("oversized target counts are rejected") {
    RgbImage img = RgbImage::filled(10, 10, 0.5f, 0.5f, 0.5f);
    CHECK_THROWS_AS(slic_segment(img, 101), DegenerateImage);
    CHECK_THROWS_AS(slic_segment(img, 1), DegenerateImage);
}

TEST_CASE("every superpixel is 4-connected and counts stay near the target") {
    std::mt19937_64 rng(77);
    RgbImage img(120, 90);
    for (auto& v : img.data) v = static_cast<float>((rng() % 1000) / 999.0);
    SuperpixelLabeling sp = slic_segment(img, 50);

    CHECK(sp.n_superpixels >= 40);
    CHECK(sp.n_superpixels <= 60);

    std::vector<int> first_pixel(sp.n_superpixels, -1);
    for (std::size_t i = 0; i < sp.labels.size(); ++i)
        if (first_pixel[sp.labels[i]] < 0) first_pixel[sp.labels[i]] = static_cast<int>(i);
    for (int lbl = 0; lbl < sp.n_superpixels; ++lbl) {
        REQUIRE(first_pixel[lbl] >= 0);
        int r = first_pixel[lbl] / sp.width, c = first_pixel[lbl] % sp.width;
        CHECK(flood_within_label(sp, r, c) == static_cast<std::size_t>(sp.sizes[lbl]));
    }
}

TEST_CASE("superpixel stats: means, centroids, and error paths") {
    RgbImage img = RgbImage::filled(6, 4, 0.5f, 0.5f, 0.5f);
    std::vector<int> labels(24, 0);
    // One superpixel covering exactly rows 0-1 x cols 0-1.
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 6; ++c)
            labels[static_cast<std::size_t>(r) * 6 + c] = (r < 2 && c < 2) ? 0 : 1;
    SuperpixelLabeling sp = superpixel_stats(img, labels);
    REQUIRE(sp.n_superpixels == 2);
    CHECK(sp.centroids[0][0] == doctest::Approx(0.5));
    CHECK(sp.centroids[0][1] == doctest::Approx(0.5));
    CHECK(sp.sizes[0] == 4);
    for (double v : sp.means[0]) CHECK(v == doctest::Approx(0.5).epsilon(1e-7));

    std::vector<int> gappy(24, 0);
    gappy[0] = 2;  // label 1 never occurs
    CHECK_THROWS_AS(superpixel_stats(img, gappy), EmptySuperpixel);
}

TEST_CASE("stats are consistent with whole-image sums") {
    std::mt19937_64 rng(31);
    RgbImage img(80, 60);
    for (auto& v : img.data) v = static_cast<float>((rng() % 1000) / 999.0);
    SuperpixelLabeling sp = slic_segment(img, 30);

    double channel_sum[3] = {0, 0, 0};
    for (std::size_t i = 0; i < img.n_pixels(); ++i)
        for (int ch = 0; ch < 3; ++ch) channel_sum[ch] += img.data[3 * i + ch];
    double weighted[3] = {0, 0, 0};
    long long total = 0;
    for (int lbl = 0; lbl < sp.n_superpixels; ++lbl) {
        total += sp.sizes[lbl];
        for (int ch = 0; ch < 3; ++ch) weighted[ch] += sp.sizes[lbl] * sp.means[lbl][ch];
    }
    CHECK(total == static_cast<long long>(img.n_pixels()));
    for (int ch = 0; ch < 3; ++ch)
        CHECK(weighted[ch] == doctest::Approx(channel_sum[ch]).epsilon(1e-6));
}

TEST_CASE("lab conversion hits reference white and black") {
    auto white = rgb_to_lab(1.0f, 1.0f, 1.0f);
    CHECK(white[0] == doctest::Approx(100.0).epsilon(1e-3));
    CHECK(white[1] == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    CHECK(white[2] == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    auto black = rgb_to_lab(0.0f, 0.0f, 0.0f);
    CHECK(black[0] == doctest::Approx(0.0));
}
