#pragma once

#include <array>
#include <vector>

#include "sled/image.hpp"

namespace sled {

/// SLIC result plus per-superpixel statistics. Labels are compact in [0,N),
/// every superpixel is 4-connected and non-empty.
struct SuperpixelLabeling {
    int width = 0;
    int height = 0;
    int n_superpixels = 0;
    std::vector<int> labels;                       // height*width, row-major
    std::vector<std::array<double, 3>> means;      // mean RGB in [0,1]
    std::vector<std::array<double, 2>> centroids;  // (row, col)
    std::vector<int> sizes;

    int label_at(int r, int c) const { return labels[static_cast<std::size_t>(r) * width + c]; }
};

struct SlicParams {
    int iterations = 10;
    double compactness = 10.0;  // m
    Exec exec = Exec::parallel;
};

/// SLIC in CIELAB+xy space: grid-seeded centers (perturbed to the lowest
/// gradient spot in a 3x3 window), iterative assignment within a 2Sx2S window,
/// connectivity enforced by relabeling small orphan components into the
/// largest adjacent superpixel. Throws DegenerateImage when n_target exceeds
/// the pixel count or is < 2.
SuperpixelLabeling slic_segment(const RgbImage& img, int n_target, const SlicParams& params = {});

/// Recomputes means/centroids/sizes from a label grid covering [0,N).
/// Throws EmptySuperpixel if some label in the range has no pixels.
SuperpixelLabeling superpixel_stats(const RgbImage& img, const std::vector<int>& labels);

/// sRGB (in [0,1]) to CIELAB under D65. Exposed for tests.
std::array<float, 3> rgb_to_lab(float r, float g, float b);

} // namespace sled
