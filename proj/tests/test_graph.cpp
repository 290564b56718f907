#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "sled/errors.hpp"
#include "sled/graph.hpp"
#include "test_util.hpp"

using namespace sled;

namespace {

// Hand-built labeling: superpixel statistics without running SLIC.
SuperpixelLabeling manual_sp(int width, int height,
                             std::vector<std::array<double, 3>> means,
                             std::vector<std::array<double, 2>> centroids) {
    SuperpixelLabeling sp;
    sp.width = width;
    sp.height = height;
    sp.n_superpixels = static_cast<int>(means.size());
    sp.means = std::move(means);
    sp.centroids = std::move(centroids);
    sp.sizes.assign(sp.n_superpixels, 1);
    return sp;
}

double eq2_weight(const std::array<double, 3>& a, const std::array<double, 3>& b, double si,
                  double sj) {
    double dr = (a[0] - b[0]) * 255.0, dg = (a[1] - b[1]) * 255.0, db = (a[2] - b[2]) * 255.0;
    double d2 = dr * dr + dg * dg + db * db;
    return std::exp(-d2 / (si * sj));
}

} // namespace

TEST_CASE("identical colors in range get weight one") {
    auto sp = manual_sp(100, 100, {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}, {{10, 10}, {20, 20}});
    GraphParams params;
    params.fixed_sigma = true;
    SuperpixelGraph g = build_graph(sp, params);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].w == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("centroids beyond the spatial threshold are never connected") {
    // Vertical separation of 40 >= 0.3 * 100.
    auto sp = manual_sp(100, 100, {{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}, {0.25, 0.2, 0.2}},
                        {{10, 50}, {50, 50}, {15, 55}});
    GraphParams params;
    params.fixed_sigma = true;
    SuperpixelGraph g = build_graph_reconnected(sp, params);
    for (const auto& e : g.edges) {
        bool long_pair = (e.u == 0 && e.v == 1);
        CHECK(!long_pair);
    }
}

TEST_CASE("fixed-sigma weights match the direct formula") {
    auto sp = manual_sp(200, 200,
                        {{0.0, 0.0, 0.0},
                         {10.0 / 255, 10.0 / 255, 10.0 / 255},
                         {200.0 / 255, 200.0 / 255, 200.0 / 255}},
                        {{10, 10}, {20, 20}, {30, 30}});
    GraphParams params;
    params.fixed_sigma = true;
    params.sigma_value = 30.0;
    SuperpixelGraph g = build_graph(sp, params);
    REQUIRE(g.edges.size() == 3);

    std::map<std::pair<int, int>, double> w;
    for (const auto& e : g.edges) w[{e.u, e.v}] = e.w;
    CHECK(w[{0, 1}] ==
          doctest::Approx(eq2_weight(sp.means[0], sp.means[1], 30, 30)).epsilon(1e-12));
    CHECK(w[{0, 2}] ==
          doctest::Approx(eq2_weight(sp.means[0], sp.means[2], 30, 30)).epsilon(1e-12));
    CHECK(w[{0, 1}] > w[{0, 2}]);
}

TEST_CASE("isolated nodes: error by default, reconnect on request") {
    // Node 2 sits far from both others.
    auto sp = manual_sp(1000, 1000, {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}},
                        {{10, 10}, {20, 20}, {900, 900}});
    GraphParams params;
    params.fixed_sigma = true;
    CHECK_THROWS_AS(build_graph(sp, params), DisconnectedNode);

    SuperpixelGraph g = build_graph_reconnected(sp, params);
    std::vector<int> deg(3, 0);
    for (const auto& e : g.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    CHECK(deg[2] == 1);
    // Reattached to the nearest centroid (node 1) with the usual weight.
    bool found = false;
    for (const auto& e : g.edges)
        if (e.u == 1 && e.v == 2) {
            found = true;
            CHECK(e.w == doctest::Approx(eq2_weight(sp.means[1], sp.means[2], 30, 30))
                             .epsilon(1e-12));
        }
    CHECK(found);
}

TEST_CASE("local scaling uses the k-th nearest color distance, clamped at one") {
    // Three mutually connectable nodes; with sigma_k = 1 each node's scale is
    // the distance to its nearest color neighbor.
    auto sp = manual_sp(100, 100,
                        {{0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}, {0.5, 0.0, 0.0}},
                        {{10, 10}, {12, 12}, {14, 14}});
    GraphParams params;
    params.sigma_k = 1;
    SuperpixelGraph g = build_graph(sp, params);
    REQUIRE(g.edges.size() == 3);

    const double d01 = 0.1 * 255.0;
    const double d12 = 0.4 * 255.0;
    const double d02 = 0.5 * 255.0;
    const double s0 = std::max(1.0, d01), s1 = std::max(1.0, d01), s2 = std::max(1.0, d12);
    std::map<std::pair<int, int>, double> w;
    for (const auto& e : g.edges) w[{e.u, e.v}] = e.w;
    CHECK(w[{0, 1}] == doctest::Approx(std::exp(-d01 * d01 / (s0 * s1))).epsilon(1e-12));
    CHECK(w[{1, 2}] == doctest::Approx(std::exp(-d12 * d12 / (s1 * s2))).epsilon(1e-12));
    CHECK(w[{0, 2}] == doctest::Approx(std::exp(-d02 * d02 / (s0 * s2))).epsilon(1e-12));
}

TEST_CASE("knn keeps everything when nodes have at most k edges") {
    std::mt19937_64 rng(5);
    SuperpixelGraph g = test::random_graph(20, 1.0, rng);
    SuperpixelGraph s = knn_sparsify(g, 50);
    CHECK(s.edges.size() == g.edges.size());
}

TEST_CASE("knn union rule on the weighted triangle") {
    SuperpixelGraph g = test::make_graph(3, {{0, 1, 0.9}, {1, 2, 0.5}, {0, 2, 0.1}});
    SuperpixelGraph s = knn_sparsify(g, 1);
    REQUIRE(s.edges.size() == 2);
    // 0.9 is top-1 for nodes 0 and 1; 0.5 is node 2's top-1; 0.1 survives nowhere.
    for (const auto& e : s.edges) CHECK(e.w != doctest::Approx(0.1));
}

TEST_CASE("knn union rule keeps all spokes of a star") {
    std::vector<GraphEdge> edges;
    for (int leaf = 1; leaf <= 6; ++leaf)
        edges.push_back({0, leaf, 0.1 * leaf});
    SuperpixelGraph g = test::make_graph(7, edges);
    SuperpixelGraph s = knn_sparsify(g, 1);
    CHECK(s.edges.size() == 6);  // every leaf's top-1 is its spoke
}

TEST_CASE("sparsification is monotone and symmetric") {
    std::mt19937_64 rng(17);
    SuperpixelGraph g = test::random_graph(40, 4.0, rng);
    SuperpixelGraph s = knn_sparsify(g, 3);
    CHECK(s.volume() <= g.volume() + 1e-12);

    std::map<std::pair<int, int>, double> orig;
    for (const auto& e : g.edges) orig[{e.u, e.v}] = e.w;
    for (const auto& e : s.edges) {
        REQUIRE(orig.count({e.u, e.v}) == 1);
        CHECK(orig[{e.u, e.v}] == e.w);
    }

    // Degrees match incident sums.
    std::vector<double> deg(s.n_nodes, 0.0);
    for (const auto& e : s.edges) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    for (int v = 0; v < s.n_nodes; ++v)
        CHECK(deg[v] == doctest::Approx(s.degrees[v]).epsilon(1e-9));
}

TEST_CASE("edge dump format") {
    SuperpixelGraph g = test::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.25}});
    std::ostringstream os;
    dump_edges(g, os);
    CHECK(os.str() == "0 1 0.5\n1 2 0.25\n");
}
