#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "sled/graph.hpp"
#include "sled/se_partition.hpp"

namespace sled::test {

/// Connected random graph: random spanning tree plus extra random edges,
/// weights uniform in (0.01, 1].
inline SuperpixelGraph random_graph(int n, double extra_edge_factor, std::mt19937_64& rng) {
    auto weight = [&] { return 0.01 + 0.99 * ((rng() >> 11) + 1.0) / 9007199254740993.0; };
    std::vector<std::pair<int, int>> edge_set;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % v);
        edge_set.push_back({std::min(u, v), std::max(u, v)});
    }
    const int extra = static_cast<int>(extra_edge_factor * n);
    for (int i = 0; i < extra; ++i) {
        int u = static_cast<int>(rng() % n);
        int v = static_cast<int>(rng() % n);
        if (u == v) continue;
        edge_set.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(edge_set.begin(), edge_set.end());
    edge_set.erase(std::unique(edge_set.begin(), edge_set.end()), edge_set.end());

    SuperpixelGraph g;
    g.n_nodes = n;
    g.degrees.assign(n, 0.0);
    for (auto& [u, v] : edge_set) {
        double w = weight();
        g.edges.push_back({u, v, w});
        g.degrees[u] += w;
        g.degrees[v] += w;
    }
    return g;
}

/// Graph from an explicit edge list.
inline SuperpixelGraph make_graph(int n, std::vector<GraphEdge> edges) {
    SuperpixelGraph g;
    g.n_nodes = n;
    g.degrees.assign(n, 0.0);
    for (auto& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
        g.edges.push_back(e);
        g.degrees[e.u] += e.w;
        g.degrees[e.v] += e.w;
    }
    return g;
}

/// Random partition with roughly n_modules modules (ids compacted).
inline Partition random_partition(const SuperpixelGraph& g, int n_modules,
                                  std::mt19937_64& rng) {
    std::vector<int> assign(g.n_nodes);
    for (int v = 0; v < g.n_nodes; ++v) assign[v] = static_cast<int>(rng() % n_modules);
    return Partition::from_assignment(g, assign);
}

/// All set partitions of {0..n-1} as restricted growth strings. Usable up to
/// n ~ 10 (Bell numbers).
inline std::vector<std::vector<int>> all_set_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    while (true) {
        out.push_back(a);
        int i = n - 1;
        for (; i > 0; --i) {
            int max_prefix = 0;
            for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, a[j]);
            if (a[i] <= max_prefix) {
                ++a[i];
                for (int j = i + 1; j < n; ++j) a[j] = 0;
                break;
            }
            a[i] = 0;
        }
        if (i == 0) break;
    }
    return out;
}

} // namespace sled::test
