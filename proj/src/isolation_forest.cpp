#include "sled/isolation_forest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sled/errors.hpp"
#include "sled/parallel.hpp"

namespace sled {
namespace {

constexpr double kEulerMascheroni = 0.5772156649;

struct TreeBuilder {
    const std::vector<std::array<double, 3>>& points;
    std::mt19937_64 rng;
    IsolationTree tree;

    int build(std::vector<int>& idx, int lo, int hi, int depth) {
        const int count = hi - lo;
        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        if (count <= 1 || depth >= tree.height_limit) {
            tree.nodes[node_id].size = count;
            return node_id;
        }

        double mins[3], maxs[3];
        for (int a = 0; a < 3; ++a) {
            mins[a] = maxs[a] = points[idx[lo]][a];
        }
        for (int i = lo + 1; i < hi; ++i)
            for (int a = 0; a < 3; ++a) {
                mins[a] = std::min(mins[a], points[idx[i]][a]);
                maxs[a] = std::max(maxs[a], points[idx[i]][a]);
            }
        int cand[3];
        int n_cand = 0;
        for (int a = 0; a < 3; ++a)
            if (std::nextafter(mins[a], maxs[a]) < maxs[a]) cand[n_cand++] = a;
        if (n_cand == 0) {  // all attributes constant
            tree.nodes[node_id].size = count;
            return node_id;
        }

        const int attr = cand[rng() % n_cand];
        double split = mins[attr] + uniform_open01(rng()) * (maxs[attr] - mins[attr]);
        if (split <= mins[attr]) split = std::nextafter(mins[attr], maxs[attr]);
        if (split >= maxs[attr]) split = std::nextafter(maxs[attr], mins[attr]);

        auto mid = std::partition(idx.begin() + lo, idx.begin() + hi,
                                  [&](int i) { return points[i][attr] < split; });
        int m = static_cast<int>(mid - idx.begin());
        // split lies strictly inside (min,max), so both sides are non-empty
        tree.nodes[node_id].attr = attr;
        tree.nodes[node_id].split = split;
        tree.nodes[node_id].left = build(idx, lo, m, depth + 1);
        tree.nodes[node_id].right = build(idx, m, hi, depth + 1);
        return node_id;
    }
};

// Partial Fisher-Yates: first k entries of a random permutation of [0,n).
std::vector<int> sample_without_replacement(int n, int k, std::mt19937_64& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace

double average_path_length(int n) {
    if (n <= 1) return 0.0;
    if (n == 2) return 1.0;
    const double h = std::log(n - 1.0) + kEulerMascheroni;
    return 2.0 * h - 2.0 * (n - 1.0) / n;
}

IsolationForest fit_forest(const std::vector<std::array<double, 3>>& healthy_features,
                           int n_trees, std::uint64_t seed, int subsample, Exec exec) {
    const int psi = static_cast<int>(healthy_features.size());
    if (psi < 2) throw TooFewSamples("fit_forest: need at least two training points");

    IsolationForest forest;
    forest.psi = psi;
    forest.c_psi = average_path_length(psi);
    forest.trees.resize(n_trees);

    const int per_tree = subsample <= 0 ? psi : std::min(subsample, psi);
    const int height_limit =
        std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(per_tree)))));

    auto fit_tree = [&](int t) {
        TreeBuilder builder{healthy_features, std::mt19937_64(mix_seed(seed, t)), {}};
        builder.tree.height_limit = height_limit;
        std::vector<int> idx = sample_without_replacement(psi, per_tree, builder.rng);
        builder.build(idx, 0, per_tree, 0);
        forest.trees[t] = std::move(builder.tree);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < n_trees; ++t) fit_tree(t);
    } else {
        for (int t = 0; t < n_trees; ++t) fit_tree(t);
    }
    return forest;
}

double path_length(const IsolationTree& tree, const std::array<double, 3>& x) {
    int node = 0;
    int depth = 0;
    while (tree.nodes[node].attr >= 0) {
        node = x[tree.nodes[node].attr] < tree.nodes[node].split ? tree.nodes[node].left
                                                                 : tree.nodes[node].right;
        ++depth;
    }
    return depth + average_path_length(tree.nodes[node].size);
}

double score(const IsolationForest& forest, const std::array<double, 3>& x) {
    double sum = 0.0;
    for (const auto& tree : forest.trees) sum += path_length(tree, x);
    const double mean_h = sum / forest.trees.size();
    return std::exp2(-mean_h / forest.c_psi);
}

ScoreMap score_map(const IsolationForest& forest, const SuperpixelLabeling& sp, Exec exec) {
    std::vector<float> sp_score(sp.n_superpixels);
    auto score_one = [&](int i) { sp_score[i] = static_cast<float>(score(forest, sp.means[i])); };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < sp.n_superpixels; ++i) score_one(i);
    } else {
        for (int i = 0; i < sp.n_superpixels; ++i) score_one(i);
    }

    ScoreMap map(sp.width, sp.height);
    const std::size_t n = map.data.size();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            map.data[i] = sp_score[sp.labels[i]];
    } else {
        for (std::size_t i = 0; i < n; ++i) map.data[i] = sp_score[sp.labels[i]];
    }
    return map;
}

} // namespace sled
