#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sled/image.hpp"

namespace sled {

/// Recipe for one synthetic dermoscopy-like image: a skin-tone background with
/// a rotated ellipse of concentric darker subregions, plus pixel noise, an
/// optional radial vignette, and optional hair strokes. Ground truth is the
/// outermost ellipse.
struct SyntheticSpec {
    int width = 768;
    int height = 560;
    double center_row = 280.0;
    double center_col = 384.0;
    double axis_a = 150.0;  // semi-axis along the rotated x direction
    double axis_b = 110.0;
    double rotation = 0.0;  // radians
    int n_subregions = 2;
    std::vector<double> subregion_offsets;  // negative; one per subregion
    std::array<double, 3> background = {0.78, 0.72, 0.68};
    double noise_sigma = 0.02;
    double vignette = 0.15;
    int hair_count = 0;
    std::uint64_t seed = 0;
};

/// Draws a randomized spec (lesion near the image center, offsets in
/// [-0.45,-0.2] so every plateau sits clearly below the background even under
/// the vignette).
SyntheticSpec random_spec(int width, int height, std::uint64_t seed, int n_subregions,
                          double noise_sigma, double vignette, int hair_count);

/// Deterministic render of the spec.
std::pair<RgbImage, LesionMask> generate(const SyntheticSpec& spec);

} // namespace sled
