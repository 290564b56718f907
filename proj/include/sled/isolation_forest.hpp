#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sled/image.hpp"
#include "sled/superpixel.hpp"

namespace sled {

struct ITreeNode {
    int attr = -1;       // split attribute; -1 marks a leaf
    double split = 0.0;  // strictly inside the node's (min,max) on attr
    int left = -1;
    int right = -1;
    int size = 0;        // training points that reached this node (leaves)
};

/// Random binary partition tree over RGB triples; nodes[0] is the root.
struct IsolationTree {
    std::vector<ITreeNode> nodes;
    int height_limit = 0;  // ceil(log2(subsample size))
};

struct IsolationForest {
    std::vector<IsolationTree> trees;
    int psi = 0;        // healthy training-set size used in the score normalizer
    double c_psi = 0.0; // c(psi)
};

/// Expected unsuccessful-search path length c(n) of a BST with n points:
/// 0 for n<=1, 1 for n==2, else 2*H(n-1) - 2(n-1)/n with the harmonic
/// approximation H(i) = ln(i) + Euler-Mascheroni.
double average_path_length(int n);

/// Builds n_trees iTrees, each on a uniform random subsample of
/// min(subsample, psi) points (subsample <= 0 trains every tree on all
/// points). Deterministic for a fixed seed, independent of thread count.
/// Throws TooFewSamples for fewer than two training points.
IsolationForest fit_forest(const std::vector<std::array<double, 3>>& healthy_features,
                           int n_trees, std::uint64_t seed, int subsample = 256,
                           Exec exec = Exec::parallel);

/// Leaf depth plus c(leaf size) for the unbuilt subtree.
double path_length(const IsolationTree& tree, const std::array<double, 3>& x);

/// Eq.-style outlier score 2^(-E(h)/c(psi)) in (0,1].
double score(const IsolationForest& forest, const std::array<double, 3>& x);

/// Per-pixel map carrying each superpixel's outlier score.
ScoreMap score_map(const IsolationForest& forest, const SuperpixelLabeling& sp,
                   Exec exec = Exec::parallel);

} // namespace sled
