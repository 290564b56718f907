#include <doctest.h>

#include <cmath>
#include <random>

#include "sled/errors.hpp"
#include "sled/postprocess.hpp"

using namespace sled;

namespace {

Histogram spikes(std::initializer_list<std::pair<int, double>> entries) {
    Histogram h{};
    for (auto& [bin, mass] : entries) h[bin] = mass;
    return h;
}

Histogram random_hist(std::mt19937_64& rng, bool allow_zeros) {
    Histogram h{};
    for (auto& v : h) {
        v = static_cast<double>(rng() % 1000);
        if (!allow_zeros) v += 1.0;
    }
    return h;
}

Mask from_rows(const std::vector<std::string>& rows) {
    Mask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (int r = 0; r < m.height; ++r)
        for (int c = 0; c < m.width; ++c) m.at(r, c) = rows[r][c] == '#' ? 1 : 0;
    return m;
}

// Brute-force GHT oracle: recompute the objective from raw sums at one split.
// tau arrives on the score scale and the objective uses bin units, as in the
// implementation.
double ght_objective(const Histogram& hist, const GhtParams& p, int t) {
    double w0 = 0, wx0 = 0, wxx0 = 0, w1 = 0, wx1 = 0, wxx1 = 0;
    for (int k = 0; k < 256; ++k) {
        double x = k;
        if (k <= t) {
            w0 += hist[k];
            wx0 += hist[k] * x;
            wxx0 += hist[k] * x * x;
        } else {
            w1 += hist[k];
            wx1 += hist[k] * x;
            wxx1 += hist[k] * x * x;
        }
    }
    double n = w0 + w1;
    double p0 = w0 / n, p1 = w1 / n;
    double d0 = wxx0 - wx0 * wx0 / w0;
    double d1 = wxx1 - wx1 * wx1 / w1;
    double tau = p.tau * 256.0;
    double v0 = std::max(1e-30, (p0 * p.nu * tau * tau + d0) / (p0 * p.nu + w0));
    double v1 = std::max(1e-30, (p1 * p.nu * tau * tau + d1) / (p1 * p.nu + w1));
    double f0 = -d0 / v0 - w0 * std::log(v0) + 2 * (w0 + p.kappa * p.omega) * std::log(w0);
    double f1 =
        -d1 / v1 - w1 * std::log(v1) + 2 * (w1 + p.kappa * (1 - p.omega)) * std::log(w1);
    return f0 + f1;
}

} // namespace

TEST_CASE("ght lands between two balanced spikes") {
    Histogram h = spikes({{51, 100.0}, {204, 100.0}});
    GhtParams params{200.0, 0.01, 0.0, 0.5};
    int t = ght_split(h, params);
    CHECK(t >= 51);
    CHECK(t < 204);

    // Full brute-force scan of the objective agrees.
    double best = -1e300;
    int best_t = -1;
    for (int s = 51; s < 204; ++s) {
        double f = ght_objective(h, params, s);
        if (f > best) {
            best = f;
            best_t = s;
        }
    }
    CHECK(t == best_t);

    double thr = ght_threshold(h, params);
    CHECK(thr > 51.0 / 256.0);
    CHECK(thr <= 205.0 / 256.0);
}

TEST_CASE("ght with huge nu equals otsu on the spike case") {
    Histogram h = spikes({{51, 100.0}, {204, 100.0}});
    GhtParams params{1e30, 0.005, 0.0, 0.5};
    CHECK(ght_split(h, params) == otsu_threshold(h));
}

TEST_CASE("single occupied bin is degenerate") {
    Histogram h = spikes({{7, 500.0}});
    CHECK_THROWS_AS(ght_split(h, GhtParams{}), DegenerateHistogram);
    CHECK_THROWS_AS(otsu_threshold(h), DegenerateHistogram);
    CHECK_THROWS_AS(met_threshold(h), DegenerateHistogram);
}

TEST_CASE("otsu: tie-break, uniform midpoint, adjacent bins") {
    Histogram equal = spikes({{50, 100.0}, {200, 100.0}});
    CHECK(otsu_threshold(equal) == 50);  // every split in [50,200) ties; lowest wins

    Histogram uniform{};
    for (auto& v : uniform) v = 10.0;
    CHECK(otsu_threshold(uniform) == 127);

    Histogram adjacent = spikes({{80, 30.0}, {81, 70.0}});
    CHECK(otsu_threshold(adjacent) == 80);
}

TEST_CASE("otsu matches an exhaustive between-class variance scan") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Histogram h = random_hist(rng, true);
        int t = otsu_threshold(h);

        double best = -1.0;
        int best_t = -1;
        double total = 0, total_x = 0;
        for (int k = 0; k < 256; ++k) {
            total += h[k];
            total_x += h[k] * k;
        }
        for (int s = 0; s < 255; ++s) {
            double w0 = 0, m0 = 0;
            for (int k = 0; k <= s; ++k) {
                w0 += h[k];
                m0 += h[k] * k;
            }
            double w1 = total - w0;
            if (w0 <= 0 || w1 <= 0) continue;
            double mu0 = m0 / w0, mu1 = (total_x - m0) / w1;
            double sigma = w0 / total * w1 / total * (mu0 - mu1) * (mu0 - mu1);
            if (sigma > best) {
                best = sigma;
                best_t = s;
            }
        }
        CHECK(t == best_t);
    }
}

TEST_CASE("ght limiting cases match the oracles on random histograms") {
    // The Otsu correspondence is the joint limit nu -> inf, tau -> 0; tau is
    // held small here so the within-class term dominates the entropy term.
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Histogram h = random_hist(rng, trial % 2 == 0);
        GhtParams otsu_like{1e30, 0.005, 0.0, 0.5};
        CHECK(ght_split(h, otsu_like) == otsu_threshold(h));
        GhtParams met_like{0.0, 0.005, 0.0, 0.5};
        CHECK(ght_split(h, met_like) == met_threshold(h));
    }
}

TEST_CASE("score histogram bins and threshold mask orientation") {
    ScoreMap map(4, 1);
    map.data = {0.1f, 0.5f, 0.9f, 1.0f};
    Histogram h = score_histogram(map);
    CHECK(h[25] == 1.0);   // 0.1 * 256 = 25.6
    CHECK(h[128] == 1.0);
    CHECK(h[230] == 1.0);
    CHECK(h[255] == 1.0);  // 1.0 clamps into the top bin

    Mask m = threshold_scores(map, 0.5);
    CHECK(m.data[0] == 0);
    CHECK(m.data[1] == 1);
    CHECK(m.data[2] == 1);
}

TEST_CASE("fill_holes closes enclosed background but not open bays") {
    Mask disc = from_rows({
        ".......",
        ".#####.",
        ".#...#.",
        ".#.#.#.",
        ".#...#.",
        ".#####.",
        ".......",
    });
    Mask filled = fill_holes(disc);
    for (int r = 2; r <= 4; ++r)
        for (int c = 2; c <= 4; ++c) CHECK(filled.at(r, c) == 1);
    CHECK(filled.at(0, 0) == 0);

    Mask c_shape = from_rows({
        ".....",
        ".###.",
        ".#...",
        ".###.",
        ".....",
    });
    Mask unchanged = fill_holes(c_shape);
    CHECK(unchanged.data == c_shape.data);

    Mask empty(5, 5, 0);
    CHECK(fill_holes(empty).count() == 0);

    // Idempotent and never removes a pixel.
    Mask again = fill_holes(filled);
    CHECK(again.data == filled.data);
    for (std::size_t i = 0; i < disc.data.size(); ++i)
        if (disc.data[i]) CHECK(filled.data[i] == 1);
}

TEST_CASE("select_component keeps the centered block") {
    Mask m(100, 100, 0);
    for (int r = 25; r < 75; ++r)
        for (int c = 25; c < 75; ++c) m.at(r, c) = 1;
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) m.at(r, c) = 1;
    Mask kept = select_component(m);
    CHECK(kept.at(50, 50) == 1);
    CHECK(kept.at(5, 5) == 0);
    CHECK(kept.count() == 2500);

    Mask single = select_component(kept);
    CHECK(single.data == kept.data);

    CHECK_THROWS_AS(select_component(Mask(4, 4, 0)), EmptyMask);
}

TEST_CASE("select_component ties break toward the first-labeled component") {
    // Two identical 4x4 blocks mirror-symmetric about the center column.
    Mask m(32, 9, 0);
    for (int r = 2; r < 6; ++r)
        for (int c = 4; c < 8; ++c) {
            m.at(r, c) = 1;
            m.at(r, 31 - c) = 1;
        }
    Mask kept = select_component(m);
    CHECK(kept.at(3, 5) == 1);   // raster-first block
    CHECK(kept.at(3, 26) == 0);
    CHECK(kept.count() == 16);
}

TEST_CASE("select_component output is one 4-connected subset of its input") {
    std::mt19937_64 rng(3);
    Mask m(40, 30, 0);
    for (auto& v : m.data) v = (rng() % 100 < 30) ? 1 : 0;
    if (m.count() == 0) m.at(10, 10) = 1;
    Mask kept = select_component(m);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (kept.data[i]) CHECK(m.data[i] == 1);

    // Flood from one kept pixel reaches every kept pixel.
    std::size_t start = 0;
    while (!kept.data[start]) ++start;
    std::vector<std::uint8_t> seen(kept.data.size(), 0);
    std::vector<std::size_t> stack = {start};
    seen[start] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        std::size_t idx = stack.back();
        stack.pop_back();
        ++reached;
        int r = static_cast<int>(idx / kept.width), c = static_cast<int>(idx % kept.width);
        const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (auto& nbp : nb) {
            if (nbp[0] < 0 || nbp[0] >= kept.height || nbp[1] < 0 || nbp[1] >= kept.width)
                continue;
            std::size_t q = static_cast<std::size_t>(nbp[0]) * kept.width + nbp[1];
            if (kept.data[q] && !seen[q]) {
                seen[q] = 1;
                stack.push_back(q);
            }
        }
    }
    CHECK(reached == kept.count());
}
