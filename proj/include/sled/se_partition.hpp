#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "sled/graph.hpp"

namespace sled {

/// Flat two-level partition of graph nodes into modules, with cached per-module
/// volume (degree sum) and cut (boundary weight).
struct Partition {
    std::vector<int> assignment;            // node -> module, compact in [0,L)
    std::vector<std::vector<int>> modules;  // module -> sorted node list
    std::vector<double> vol;
    std::vector<double> cut;

    int n_modules() const { return static_cast<int>(modules.size()); }

    /// Every node in its own module.
    static Partition singletons(const SuperpixelGraph& g);
    /// Builds a partition from an arbitrary assignment (ids are compacted) and
    /// recomputes vol/cut from scratch.
    static Partition from_assignment(const SuperpixelGraph& g, const std::vector<int>& assign);
};

/// Two-dimensional structural entropy of g under partition p, in bits.
/// Terms with zero volume or zero degree contribute 0. Throws EmptyGraph when
/// the graph has no edges.
double structural_entropy(const SuperpixelGraph& g, const Partition& p);

/// Decrease of structural entropy from merging modules x and y
/// (positive = merging lowers the entropy).
double delta_merge(const SuperpixelGraph& g, const Partition& p, int x, int y);

/// Decrease of structural entropy from removing node v out of its module x
/// into a fresh singleton module.
double delta_remove(const SuperpixelGraph& g, const Partition& p, int x, int v);

/// Increase of structural entropy from dissolving singleton v into module y.
double delta_insert(const SuperpixelGraph& g, const Partition& p, int y, int v);

struct MinimizeOptions {
    int max_refine_iters = 100;
    bool adjacent_only = true;   // refinement candidates: modules joined by an edge
    double min_gain = 1e-12;     // strict improvement required per move
    Exec exec = Exec::serial;    // the optimizer itself is sequential
    std::function<void(const Partition&)> on_merge;  // called after every merge
    std::function<void(const Partition&)> on_sweep;  // called after every refinement sweep
};

/// Greedy merging from singletons: repeatedly merges the edge-connected module
/// pair with the largest positive entropy decrease.
Partition merge_stage(const SuperpixelGraph& g, const MinimizeOptions& opts = {});

/// Node sweeps in id order; each node moves to the candidate module maximizing
/// delta_remove - delta_insert when that gain exceeds min_gain. Stops after a
/// sweep without moves or max_iters sweeps. Empty modules are dropped.
Partition refine_stage(const SuperpixelGraph& g, Partition p, int max_iters,
                       const MinimizeOptions& opts = {});

/// merge_stage followed by refine_stage; module count is determined adaptively.
Partition minimize(const SuperpixelGraph& g, const MinimizeOptions& opts = {});

/// Debug dump, one "node_id module_id" line per node.
void dump_partition(const Partition& p, std::ostream& os);

} // namespace sled
