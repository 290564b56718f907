#pragma once

#include <array>

#include "sled/image.hpp"

namespace sled {

/// 256 uniform bins over [0,1].
using Histogram = std::array<double, 256>;

Histogram score_histogram(const ScoreMap& map);

/// GHT hyperparameters. nu is the strength of the variance prior with mode
/// tau^2, kappa/omega the strength and mode of the mixing-weight prior.
/// nu -> infinity recovers Otsu's split, nu = kappa = 0 recovers minimum
/// error thresholding.
struct GhtParams {
    double nu = 0.0;
    double tau = 0.01;
    double kappa = 0.0;
    double omega = 0.5;
};

/// Split index t in [0,254] maximizing the GHT posterior objective; class 0 is
/// bins 0..t. Ties pick the lowest t. Throws DegenerateHistogram when fewer
/// than two bins are occupied.
int ght_split(const Histogram& hist, const GhtParams& params);

/// ght_split mapped to a score threshold: pixels with score >= (t+1)/256 fall
/// in the upper class.
double ght_threshold(const Histogram& hist, const GhtParams& params);

/// Split maximizing the pixel-level between-class variance (independent Otsu
/// oracle for the nu -> infinity limit). Lowest-index tie-break.
int otsu_threshold(const Histogram& hist);

/// Split minimizing the Kittler-Illingworth criterion (independent oracle for
/// the nu = kappa = 0 limit); class variances are floored at 1e-30 to match
/// the GHT convention on degenerate one-bin classes.
int met_threshold(const Histogram& hist);

Mask threshold_scores(const ScoreMap& map, double threshold);

/// Background 4-components not reachable from the image border become lesion.
Mask fill_holes(const Mask& mask);

/// Keeps the single 4-connected component with the largest sum of a centered
/// isotropic Gaussian (sigma = 0.5*min(H,W)); size and centrality both raise
/// the score. Throws EmptyMask when no component exists.
Mask select_component(const Mask& mask);

} // namespace sled
