#pragma once

#include <iosfwd>
#include <vector>

#include "sled/superpixel.hpp"

namespace sled {

struct GraphEdge {
    int u = 0, v = 0;  // u < v
    double w = 0.0;
};

/// Undirected weighted superpixel graph with cached weighted degrees. No
/// self-loops, weights in (0,1].
struct SuperpixelGraph {
    int n_nodes = 0;
    std::vector<GraphEdge> edges;
    std::vector<double> degrees;

    double volume() const {
        double v = 0.0;
        for (double d : degrees) v += d;
        return v;
    }
};

struct GraphParams {
    double r = 0.3;           // spatial threshold fraction of image extent
    int sigma_k = 30;         // neighbor index for local scaling
    bool fixed_sigma = false; // alternative reading: sigma_i = sigma_j = sigma_value
    double sigma_value = 30.0;
    Exec exec = Exec::parallel;
};

/// Connects superpixels whose centroids are within (r*H, r*W) and weights them
/// with exp(-d^2 / (sigma_i*sigma_j)) over mean-RGB distance scaled to [0,255].
/// sigma_i is the distance to the sigma_k-th nearest connectable neighbor in
/// color space, clamped below at 1 (or the fixed value when fixed_sigma).
/// Throws DisconnectedNode if any node ends up with no edge.
SuperpixelGraph build_graph(const SuperpixelLabeling& sp, const GraphParams& params = {});

/// Same construction, but isolated nodes are reattached to their
/// nearest-centroid neighbor with the usual similarity weight.
SuperpixelGraph build_graph_reconnected(const SuperpixelLabeling& sp,
                                        const GraphParams& params = {});

/// Keeps edge (i,j) iff it is among the k strongest edges of i or of j.
SuperpixelGraph knn_sparsify(const SuperpixelGraph& g, int k);

/// Debug dump, one "i j weight" line per edge.
void dump_edges(const SuperpixelGraph& g, std::ostream& os);

/// CSR adjacency view used by the partition algorithms.
struct Adjacency {
    std::vector<int> offsets;    // n_nodes+1
    std::vector<int> neighbor;
    std::vector<double> weight;
};
Adjacency build_adjacency(const SuperpixelGraph& g);

} // namespace sled
