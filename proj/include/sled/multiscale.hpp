#pragma once

#include <vector>

#include "sled/image.hpp"

namespace sled {

/// One scale's contribution to the fusion: its score map and the bisection
/// confidence. Degenerate scales (single-region partitions, no healthy
/// training set) carry no usable map and get weight 0.
struct ScaleResult {
    int epsilon = 0;  // superpixel count of the scale
    ScoreMap map;
    double sigma2_b = 0.0;
    bool degenerate = false;
};

/// exp((sigma2_b - min) / max(min, 1e-6)) with the exponent capped at 50;
/// the floor guards the min = 0 case.
double scale_weight(double sigma2_b, double min_sigma2_b);

/// Per-pixel convex combination of the non-degenerate score maps, weighted by
/// scale_weight. Throws AllScalesDegenerate when nothing can contribute.
ScoreMap integrate(const std::vector<ScaleResult>& results, Exec exec = Exec::parallel);

} // namespace sled
