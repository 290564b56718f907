#pragma once

#include <vector>

#include "sled/image.hpp"
#include "sled/se_partition.hpp"
#include "sled/superpixel.hpp"

namespace sled {

enum class Channel : int { R = 0, G = 1, B = 2 };

/// Occurrence probability and mean intensity of one region on a channel.
struct RegionIntensity {
    int region = 0;
    double omega = 0.0;  // pixel fraction
    double mu = 0.0;     // mean channel intensity in [0,1]
};

struct BisectSplit {
    double threshold_tau = 0.0;  // midpoint between the straddling region means
    double sigma2_b = 0.0;
    std::vector<int> lesion;     // darker class C0, region ids
    std::vector<int> healthy;    // C1
};

struct BisectionResult {
    Channel channel = Channel::R;
    double threshold_tau = 0.0;
    std::vector<int> lesion_regions;
    std::vector<int> healthy_regions;
    double sigma2_b = 0.0;
};

/// Per-region omega (pixel fraction of the image) and mu (mean pixel intensity
/// of the chosen channel).
std::vector<RegionIntensity> region_intensities(const RgbImage& img, const SuperpixelLabeling& sp,
                                                const Partition& p, Channel channel);

/// Scans the L-1 splits of the mu-sorted regions and keeps the one maximizing
/// between-class variance; ties pick the lowest split. Throws SingleRegion
/// for fewer than two regions.
BisectSplit bisect(const std::vector<RegionIntensity>& regions);

/// Runs the bisection on each RGB channel and returns the channel with the
/// largest between-class variance (ties in order R, G, B). C0, the darker
/// class, is the lesion side.
BisectionResult select_channel(const RgbImage& img, const SuperpixelLabeling& sp,
                               const Partition& p);

} // namespace sled
