#pragma once

#include "sled/image.hpp"

namespace sled {

/// Bilinear resize; samples at pixel centers, clamped at borders.
RgbImage resize(const RgbImage& img, int target_w, int target_h, Exec exec = Exec::parallel);

/// Shades-of-gray color constancy with Minkowski order p=6: each channel is
/// scaled by mean(e)/e_c where e_c = (mean I_c^p)^(1/p), then clipped to [0,1].
/// Throws DegenerateImage if a channel is identically zero.
RgbImage shades_of_gray(const RgbImage& img, Exec exec = Exec::parallel);

/// Grayscale morphological closing with a centered line structuring element of
/// 2*half_len+1 pixels along direction (dir_r, dir_c). Out-of-image taps are
/// skipped. Exposed for tests and benchmarks.
GrayImage morph_close_line(const GrayImage& img, int dir_r, int dir_c, int half_len,
                           Exec exec = Exec::parallel);

/// Thin dark curvilinear structures: max over {0,45,90,135} degree line
/// closings (length 15) minus luminance, thresholded at 0.1, dilated 3x3.
ArtifactMask detect_hairs(const RgbImage& img, Exec exec = Exec::parallel);

/// Pixels with luminance < 0.08 whose 4-connected component touches an image
/// corner.
ArtifactMask mask_dark_corners(const RgbImage& img);

/// Replaces masked pixels by repeated 3x3 means of already-valid neighbors
/// until the mask is exhausted; unmasked pixels are untouched. Throws
/// DegenerateImage when the mask covers every pixel.
RgbImage inpaint_artifacts(const RgbImage& img, const ArtifactMask& mask);

/// Full preprocessing chain: resize -> dark corners -> hairs -> inpaint the
/// union -> shades-of-gray.
RgbImage preprocess_image(const RgbImage& img, int target_w, int target_h,
                          Exec exec = Exec::parallel);

} // namespace sled
