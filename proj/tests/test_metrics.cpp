#include <doctest.h>

#include <random>
#include <sstream>

#include "sled/errors.hpp"
#include "sled/metrics.hpp"

using namespace sled;

namespace {

Mask random_mask(int w, int h, std::mt19937_64& rng, int percent) {
    Mask m(w, h);
    for (auto& v : m.data) v = (rng() % 100 < static_cast<unsigned>(percent)) ? 1 : 0;
    return m;
}

} // namespace

TEST_CASE("confusion counts: identity, inversion, shifted overlap") {
    Mask gt(10, 10, 0);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) gt.at(r, c) = 1;

    ConfusionCounts same = confusion(gt, gt);
    CHECK(same.tp == 16);
    CHECK(same.tn == 84);
    CHECK(same.fp == 0);
    CHECK(same.fn == 0);

    Mask inv(10, 10);
    for (std::size_t i = 0; i < inv.data.size(); ++i) inv.data[i] = gt.data[i] ? 0 : 1;
    ConfusionCounts flipped = confusion(inv, gt);
    CHECK(flipped.tp == 0);
    CHECK(flipped.tn == 0);

    // 4x4 prediction shifted to overlap the ground truth on 8 pixels.
    Mask shifted(10, 10, 0);
    for (int r = 0; r < 4; ++r)
        for (int c = 2; c < 6; ++c) shifted.at(r, c) = 1;
    ConfusionCounts c = confusion(shifted, gt);
    CHECK(c.tp == 8);
    CHECK(c.fp == 8);
    CHECK(c.fn == 8);
    CHECK(c.tn == 76);

    CHECK_THROWS_AS(confusion(Mask(4, 4), Mask(5, 4)), DimensionMismatch);
}

TEST_CASE("metric ratios: pinned worked example and conventions") {
    MetricsReport perfect = compute({16, 0, 84, 0});
    CHECK(perfect.ac == 1.0);
    CHECK(perfect.se == 1.0);
    CHECK(perfect.sp == 1.0);
    CHECK(perfect.di == 1.0);
    CHECK(perfect.ja == 1.0);

    MetricsReport m = compute({8, 8, 76, 8});
    CHECK(m.ac == doctest::Approx(0.84).epsilon(1e-12));
    CHECK(m.se == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.sp == doctest::Approx(76.0 / 84.0).epsilon(1e-12));
    CHECK(m.di == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.ja == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Both masks empty: SE, DI, JA are 0/0 and count as perfect.
    MetricsReport empty = compute({0, 0, 100, 0});
    CHECK(empty.se == 1.0);
    CHECK(empty.di == 1.0);
    CHECK(empty.ja == 1.0);
    CHECK(empty.ac == 1.0);
    CHECK(empty.sp == 1.0);
}

TEST_CASE("metric identities on random masks") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        Mask a = random_mask(20, 15, rng, 30);
        Mask b = random_mask(20, 15, rng, 40);
        MetricsReport m = compute(confusion(a, b));
        CHECK(m.ja <= m.di + 1e-12);
        CHECK(m.di <= 1.0);
        if (m.ja < 1.0)
            CHECK(m.di == doctest::Approx(2.0 * m.ja / (1.0 + m.ja)).epsilon(1e-12));

        // compute(confusion(m, m)) is all ones.
        MetricsReport self = compute(confusion(a, a));
        CHECK(self.ac == 1.0);
        CHECK(self.ja == 1.0);

        // Swapping prediction and truth leaves AC, DI, JA unchanged.
        MetricsReport swapped = compute(confusion(b, a));
        CHECK(swapped.ac == doctest::Approx(m.ac).epsilon(1e-12));
        CHECK(swapped.di == doctest::Approx(m.di).epsilon(1e-12));
        CHECK(swapped.ja == doctest::Approx(m.ja).epsilon(1e-12));
    }
}

TEST_CASE("csv report layout with statuses and mean row") {
    std::vector<CsvRow> rows(3);
    rows[0] = {"img_000", true, {1.0, 1.0, 1.0, 1.0, 1.0}, ""};
    rows[1] = {"img_001", false, {}, "no_gt"};
    rows[2] = {"img_002", true, {0.5, 0.5, 0.5, 0.5, 0.5}, ""};
    std::ostringstream os;
    write_csv(os, rows);
    std::string out = os.str();
    CHECK(out.find("image,ac,se,sp,di,ja\n") == 0);
    CHECK(out.find("img_000,1.000000,1.000000,1.000000,1.000000,1.000000\n") !=
          std::string::npos);
    CHECK(out.find("img_001,no_gt,,,,\n") != std::string::npos);
    CHECK(out.find("mean,0.750000,0.750000,0.750000,0.750000,0.750000\n") !=
          std::string::npos);
}
