#include "sled/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sled/errors.hpp"

namespace sled {
namespace {

double color_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    // Mean RGB scaled to [0,255].
    double dr = (a[0] - b[0]) * 255.0;
    double dg = (a[1] - b[1]) * 255.0;
    double db = (a[2] - b[2]) * 255.0;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

bool spatially_connectable(const SuperpixelLabeling& sp, int i, int j, double r) {
    double dr = std::fabs(sp.centroids[i][0] - sp.centroids[j][0]);
    double dc = std::fabs(sp.centroids[i][1] - sp.centroids[j][1]);
    return dr < r * sp.height && dc < r * sp.width;
}

// Local scale per node: distance to the sigma_k-th nearest connectable
// neighbor in color space (the farthest available one when there are fewer),
// clamped below at 1. Falls back to all nodes when nothing is connectable.
std::vector<double> local_scales(const SuperpixelLabeling& sp, const GraphParams& params) {
    const int n = sp.n_superpixels;
    std::vector<double> sigma(n, params.sigma_value);
    if (params.fixed_sigma) return sigma;

    auto compute = [&](int i) {
        std::vector<double> dists;
        dists.reserve(n);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (spatially_connectable(sp, i, j, params.r))
                dists.push_back(color_distance(sp.means[i], sp.means[j]));
        }
        if (dists.empty()) {
            for (int j = 0; j < n; ++j)
                if (j != i) dists.push_back(color_distance(sp.means[i], sp.means[j]));
        }
        if (dists.empty()) {
            sigma[i] = 1.0;
            return;
        }
        std::size_t k = std::min<std::size_t>(params.sigma_k, dists.size()) - 1;
        std::nth_element(dists.begin(), dists.begin() + k, dists.end());
        sigma[i] = std::max(1.0, dists[k]);
    };
    if (params.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) compute(i);
    } else {
        for (int i = 0; i < n; ++i) compute(i);
    }
    return sigma;
}

SuperpixelGraph build_impl(const SuperpixelLabeling& sp, const GraphParams& params,
                           bool reconnect) {
    const int n = sp.n_superpixels;
    SuperpixelGraph g;
    g.n_nodes = n;
    g.degrees.assign(n, 0.0);
    if (n < 2) throw DisconnectedNode("build_graph: fewer than two superpixels");

    std::vector<double> sigma = local_scales(sp, params);

    // Per-node edge lists (j > i) computed independently, then concatenated in
    // node order; identical output for both execution policies.
    std::vector<std::vector<GraphEdge>> per_node(n);
    auto connect = [&](int i) {
        auto& out = per_node[i];
        for (int j = i + 1; j < n; ++j) {
            if (!spatially_connectable(sp, i, j, params.r)) continue;
            double d = color_distance(sp.means[i], sp.means[j]);
            double w = std::exp(-(d * d) / (sigma[i] * sigma[j]));
            if (w > 0.0) out.push_back({i, j, w});
        }
    };
    if (params.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int i = 0; i < n; ++i) connect(i);
    } else {
        for (int i = 0; i < n; ++i) connect(i);
    }
    for (auto& list : per_node)
        for (auto& e : list) {
            g.edges.push_back(e);
            g.degrees[e.u] += e.w;
            g.degrees[e.v] += e.w;
        }

    std::vector<int> isolated;
    std::vector<int> edge_count(n, 0);
    for (auto& e : g.edges) {
        ++edge_count[e.u];
        ++edge_count[e.v];
    }
    for (int i = 0; i < n; ++i)
        if (edge_count[i] == 0) isolated.push_back(i);

    if (!isolated.empty() && !reconnect)
        throw DisconnectedNode("build_graph: node " + std::to_string(isolated.front()) +
                               " has no edges");

    for (int i : isolated) {
        int best = -1;
        double best_d = std::numeric_limits<double>::max();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double dr = sp.centroids[i][0] - sp.centroids[j][0];
            double dc = sp.centroids[i][1] - sp.centroids[j][1];
            double d = dr * dr + dc * dc;
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        double d = color_distance(sp.means[i], sp.means[best]);
        double w = std::exp(-(d * d) / (sigma[i] * sigma[best]));
        GraphEdge e{std::min(i, best), std::max(i, best), w};
        g.edges.push_back(e);
        g.degrees[e.u] += e.w;
        g.degrees[e.v] += e.w;
    }
    if (!isolated.empty())
        std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
            return a.u < b.u || (a.u == b.u && a.v < b.v);
        });
    return g;
}

} // namespace

SuperpixelGraph build_graph(const SuperpixelLabeling& sp, const GraphParams& params) {
    return build_impl(sp, params, false);
}

SuperpixelGraph build_graph_reconnected(const SuperpixelLabeling& sp, const GraphParams& params) {
    return build_impl(sp, params, true);
}

SuperpixelGraph knn_sparsify(const SuperpixelGraph& g, int k) {
    const int n = g.n_nodes;
    // Rank every node's incident edges by (weight desc, edge index asc) and
    // keep the union of per-node top-k.
    std::vector<std::vector<std::pair<double, std::size_t>>> incident(n);
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        incident[g.edges[ei].u].push_back({g.edges[ei].w, ei});
        incident[g.edges[ei].v].push_back({g.edges[ei].w, ei});
    }
    std::vector<std::uint8_t> keep(g.edges.size(), 0);
    for (int i = 0; i < n; ++i) {
        auto& inc = incident[i];
        std::size_t kk = std::min<std::size_t>(k, inc.size());
        std::partial_sort(inc.begin(), inc.begin() + kk, inc.end(),
                          [](const auto& a, const auto& b) {
                              return a.first > b.first ||
                                     (a.first == b.first && a.second < b.second);
                          });
        for (std::size_t t = 0; t < kk; ++t) keep[inc[t].second] = 1;
    }
    SuperpixelGraph out;
    out.n_nodes = n;
    out.degrees.assign(n, 0.0);
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        if (!keep[ei]) continue;
        out.edges.push_back(g.edges[ei]);
        out.degrees[g.edges[ei].u] += g.edges[ei].w;
        out.degrees[g.edges[ei].v] += g.edges[ei].w;
    }
    return out;
}

void dump_edges(const SuperpixelGraph& g, std::ostream& os) {
    for (const auto& e : g.edges) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

Adjacency build_adjacency(const SuperpixelGraph& g) {
    Adjacency adj;
    adj.offsets.assign(g.n_nodes + 1, 0);
    for (const auto& e : g.edges) {
        ++adj.offsets[e.u + 1];
        ++adj.offsets[e.v + 1];
    }
    for (int i = 0; i < g.n_nodes; ++i) adj.offsets[i + 1] += adj.offsets[i];
    adj.neighbor.resize(2 * g.edges.size());
    adj.weight.resize(2 * g.edges.size());
    std::vector<int> pos(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& e : g.edges) {
        adj.neighbor[pos[e.u]] = e.v;
        adj.weight[pos[e.u]++] = e.w;
        adj.neighbor[pos[e.v]] = e.u;
        adj.weight[pos[e.v]++] = e.w;
    }
    return adj;
}

} // namespace sled
