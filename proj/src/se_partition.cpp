#include "sled/se_partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <queue>

#include "sled/errors.hpp"

namespace sled {
namespace {

// Shared building block of the merge delta:
// (vol - cut) * log2(vol), with the vol = 0 convention of 0.
inline double vc_log_vol(double vol, double cut) {
    return vol > 0.0 ? (vol - cut) * std::log2(vol) : 0.0;
}

double graph_volume_checked(const SuperpixelGraph& g) {
    if (g.edges.empty()) throw EmptyGraph("structural entropy: graph has no edges");
    return g.volume();
}

// Total edge weight between node v and the nodes of module m.
double weight_to_module(const Adjacency& adj, const std::vector<int>& assignment, int v, int m) {
    double w = 0.0;
    for (int e = adj.offsets[v]; e < adj.offsets[v + 1]; ++e)
        if (assignment[adj.neighbor[e]] == m) w += adj.weight[e];
    return w;
}

} // namespace

Partition Partition::singletons(const SuperpixelGraph& g) {
    Partition p;
    p.assignment.resize(g.n_nodes);
    p.modules.resize(g.n_nodes);
    p.vol.resize(g.n_nodes);
    p.cut.resize(g.n_nodes);
    for (int v = 0; v < g.n_nodes; ++v) {
        p.assignment[v] = v;
        p.modules[v] = {v};
        p.vol[v] = g.degrees[v];
        p.cut[v] = g.degrees[v];  // no self-loops: every incident edge leaves
    }
    return p;
}

Partition Partition::from_assignment(const SuperpixelGraph& g, const std::vector<int>& assign) {
    Partition p;
    int max_id = -1;
    for (int m : assign) max_id = std::max(max_id, m);
    std::vector<int> remap(max_id + 1, -1);
    int compact = 0;
    for (int m : assign)
        if (remap[m] < 0) remap[m] = compact++;

    p.assignment.resize(assign.size());
    p.modules.resize(compact);
    p.vol.assign(compact, 0.0);
    p.cut.assign(compact, 0.0);
    for (std::size_t v = 0; v < assign.size(); ++v) {
        int m = remap[assign[v]];
        p.assignment[v] = m;
        p.modules[m].push_back(static_cast<int>(v));
        p.vol[m] += g.degrees[v];
    }
    for (const auto& e : g.edges) {
        int mu = p.assignment[e.u], mv = p.assignment[e.v];
        if (mu != mv) {
            p.cut[mu] += e.w;
            p.cut[mv] += e.w;
        }
    }
    return p;
}

double structural_entropy(const SuperpixelGraph& g, const Partition& p) {
    const double vol_g = graph_volume_checked(g);
    double node_terms = 0.0;
    double cut_terms = 0.0;
    for (int m = 0; m < p.n_modules(); ++m) {
        const double vol_m = p.vol[m];
        if (vol_m <= 0.0) continue;
        for (int v : p.modules[m]) {
            const double d = g.degrees[v];
            if (d > 0.0) node_terms -= (d / vol_g) * std::log2(d / vol_m);
        }
        cut_terms -= (p.cut[m] / vol_g) * std::log2(vol_m / vol_g);
    }
    return node_terms + cut_terms;
}

double delta_merge(const SuperpixelGraph& g, const Partition& p, int x, int y) {
    const double vol_g = graph_volume_checked(g);
    double wxy = 0.0;
    for (const auto& e : g.edges) {
        int mu = p.assignment[e.u], mv = p.assignment[e.v];
        if ((mu == x && mv == y) || (mu == y && mv == x)) wxy += e.w;
    }
    const double vol_xy = p.vol[x] + p.vol[y];
    const double cut_xy = p.cut[x] + p.cut[y] - 2.0 * wxy;
    return (vc_log_vol(p.vol[x], p.cut[x]) + vc_log_vol(p.vol[y], p.cut[y]) -
            vc_log_vol(vol_xy, cut_xy) +
            (p.cut[x] + p.cut[y] - cut_xy) * std::log2(vol_g)) /
           vol_g;
}

double delta_remove(const SuperpixelGraph& g, const Partition& p, int x, int v) {
    const double vol_g = graph_volume_checked(g);
    Adjacency adj = build_adjacency(g);
    const double w_in = weight_to_module(adj, p.assignment, v, x);  // v to X\{v}
    const double d = g.degrees[v];
    const double vol_rest = p.vol[x] - d;
    const double cut_rest = p.cut[x] - d + 2.0 * w_in;
    double term_x =
        p.vol[x] > 0.0 ? (p.vol[x] - p.cut[x]) / vol_g * std::log2(p.vol[x] / vol_g) : 0.0;
    double term_rest =
        vol_rest > 0.0 ? (vol_rest - cut_rest) / vol_g * std::log2(vol_rest / vol_g) : 0.0;
    return term_x - term_rest;
}

double delta_insert(const SuperpixelGraph& g, const Partition& p, int y, int v) {
    const double vol_g = graph_volume_checked(g);
    Adjacency adj = build_adjacency(g);
    const double w_in = weight_to_module(adj, p.assignment, v, y);
    const double d = g.degrees[v];
    const double vol_new = p.vol[y] + d;
    const double cut_new = p.cut[y] + d - 2.0 * w_in;
    double term_y =
        p.vol[y] > 0.0 ? (p.vol[y] - p.cut[y]) / vol_g * std::log2(p.vol[y] / vol_g) : 0.0;
    double term_new =
        vol_new > 0.0 ? (vol_new - cut_new) / vol_g * std::log2(vol_new / vol_g) : 0.0;
    return -term_y + term_new;
}

namespace {

// Mutable merge-stage state: module adjacency as ordered maps (module id ->
// cross weight), a lazily invalidated max-heap of candidate merges, and
// per-module version counters.
struct MergeState {
    double vol_g;
    std::vector<double> vol, cut;
    std::vector<std::map<int, double>> nbrs;
    std::vector<int> version;
    std::vector<char> alive;

    double delta(int x, int y, double wxy) const {
        const double vol_xy = vol[x] + vol[y];
        const double cut_xy = cut[x] + cut[y] - 2.0 * wxy;
        return (vc_log_vol(vol[x], cut[x]) + vc_log_vol(vol[y], cut[y]) -
                vc_log_vol(vol_xy, cut_xy) + (cut[x] + cut[y] - cut_xy) * std::log2(vol_g)) /
               vol_g;
    }
};

struct MergeCandidate {
    double delta;
    int x, y;          // x < y
    int ver_x, ver_y;
    bool operator<(const MergeCandidate& o) const {
        // max-heap on delta; deterministic tie-break on module ids
        if (delta != o.delta) return delta < o.delta;
        if (x != o.x) return x > o.x;
        return y > o.y;
    }
};

} // namespace

Partition merge_stage(const SuperpixelGraph& g, const MinimizeOptions& opts) {
    graph_volume_checked(g);
    const int n = g.n_nodes;

    MergeState st;
    st.vol_g = g.volume();
    st.vol.assign(g.degrees.begin(), g.degrees.end());
    st.cut.assign(g.degrees.begin(), g.degrees.end());
    st.nbrs.resize(n);
    st.version.assign(n, 0);
    st.alive.assign(n, 1);
    for (const auto& e : g.edges) {
        if (e.u == e.v) continue;
        st.nbrs[e.u][e.v] += e.w;
        st.nbrs[e.v][e.u] += e.w;
    }

    std::vector<int> module_of(n);
    for (int v = 0; v < n; ++v) module_of[v] = v;

    std::priority_queue<MergeCandidate> heap;
    for (int x = 0; x < n; ++x)
        for (const auto& [y, w] : st.nbrs[x])
            if (x < y) heap.push({st.delta(x, y, w), x, y, 0, 0});

    const bool observe = static_cast<bool>(opts.on_merge);

    while (!heap.empty()) {
        MergeCandidate top = heap.top();
        heap.pop();
        if (!st.alive[top.x] || !st.alive[top.y]) continue;
        if (st.version[top.x] != top.ver_x || st.version[top.y] != top.ver_y) continue;
        if (top.delta <= 0.0) break;

        // Merge y into x.
        const int x = top.x, y = top.y;
        const double wxy = st.nbrs[x].at(y);
        st.cut[x] = st.cut[x] + st.cut[y] - 2.0 * wxy;
        st.vol[x] += st.vol[y];
        st.alive[y] = 0;
        ++st.version[x];
        ++st.version[y];

        st.nbrs[x].erase(y);
        st.nbrs[y].erase(x);
        for (const auto& [z, w] : st.nbrs[y]) {
            st.nbrs[z].erase(y);
            st.nbrs[x][z] += w;
            st.nbrs[z][x] = st.nbrs[x][z];
        }
        st.nbrs[y].clear();

        for (const auto& [z, w] : st.nbrs[x]) {
            int a = std::min(x, z), b = std::max(x, z);
            heap.push({st.delta(a, b, w), a, b, st.version[a], st.version[b]});
        }

        for (int v = 0; v < n; ++v)
            if (module_of[v] == y) module_of[v] = x;
        if (observe) opts.on_merge(Partition::from_assignment(g, module_of));
    }

    return Partition::from_assignment(g, module_of);
}

Partition refine_stage(const SuperpixelGraph& g, Partition p, int max_iters,
                       const MinimizeOptions& opts) {
    graph_volume_checked(g);
    const double vol_g = g.volume();
    const int n = g.n_nodes;
    Adjacency adj = build_adjacency(g);

    const int n_slots = p.n_modules();
    std::vector<double> vol = p.vol, cut = p.cut;
    std::vector<int> assign = p.assignment;

    // Scratch for per-node module weights, reused across nodes.
    std::vector<double> w_to(n_slots, 0.0);
    std::vector<int> stamp(n_slots, -1);

    for (int sweep = 0; sweep < max_iters; ++sweep) {
        bool moved = false;
        for (int v = 0; v < n; ++v) {
            const int x = assign[v];
            const double d = g.degrees[v];

            std::vector<int> cands;
            for (int e = adj.offsets[v]; e < adj.offsets[v + 1]; ++e) {
                int m = assign[adj.neighbor[e]];
                if (stamp[m] != v) {
                    stamp[m] = v;
                    w_to[m] = 0.0;
                    cands.push_back(m);
                }
                w_to[m] += adj.weight[e];
            }
            if (!opts.adjacent_only) {
                for (int m = 0; m < n_slots; ++m) {
                    if (vol[m] <= 0.0 && m != x) continue;
                    if (stamp[m] != v) {
                        stamp[m] = v;
                        w_to[m] = 0.0;
                        cands.push_back(m);
                    }
                }
            }
            std::sort(cands.begin(), cands.end());

            const double w_in_x = stamp[x] == v ? w_to[x] : 0.0;
            const double vol_rest = vol[x] - d;
            const double cut_rest = cut[x] - d + 2.0 * w_in_x;
            const double term_x =
                vol[x] > 0.0 ? (vol[x] - cut[x]) / vol_g * std::log2(vol[x] / vol_g) : 0.0;
            const double term_rest =
                vol_rest > 0.0 ? (vol_rest - cut_rest) / vol_g * std::log2(vol_rest / vol_g)
                               : 0.0;
            const double d_remove = term_x - term_rest;

            // Staying put has gain exactly 0; candidates must beat min_gain.
            double best_gain = 0.0;
            int best_m = x;
            for (int m : cands) {
                if (m == x) continue;
                const double w_in = w_to[m];
                const double vol_new = vol[m] + d;
                const double cut_new = cut[m] + d - 2.0 * w_in;
                const double term_y =
                    vol[m] > 0.0 ? (vol[m] - cut[m]) / vol_g * std::log2(vol[m] / vol_g) : 0.0;
                const double term_new =
                    (vol_new - cut_new) / vol_g * std::log2(vol_new / vol_g);
                const double gain = d_remove - (-term_y + term_new);
                // Strict > keeps ties on the current module first, then on the
                // lowest candidate id (cands are sorted ascending).
                if (gain > best_gain) {
                    best_gain = gain;
                    best_m = m;
                }
            }
            if (best_m != x && best_gain > opts.min_gain) {
                const double w_in_new = w_to[best_m];
                vol[x] -= d;
                cut[x] = cut[x] - d + 2.0 * w_in_x;
                vol[best_m] += d;
                cut[best_m] = cut[best_m] + d - 2.0 * w_in_new;
                assign[v] = best_m;
                moved = true;
            }
        }
        if (opts.on_sweep) opts.on_sweep(Partition::from_assignment(g, assign));
        if (!moved) break;
    }
    return Partition::from_assignment(g, assign);
}

Partition minimize(const SuperpixelGraph& g, const MinimizeOptions& opts) {
    Partition merged = merge_stage(g, opts);
    return refine_stage(g, std::move(merged), opts.max_refine_iters, opts);
}

void dump_partition(const Partition& p, std::ostream& os) {
    for (std::size_t v = 0; v < p.assignment.size(); ++v)
        os << v << ' ' << p.assignment[v] << '\n';
}

} // namespace sled
