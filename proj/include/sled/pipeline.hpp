#pragma once

#include <string>
#include <vector>

#include "sled/bisection.hpp"
#include "sled/config.hpp"
#include "sled/image.hpp"
#include "sled/metrics.hpp"
#include "sled/multiscale.hpp"
#include "sled/se_partition.hpp"
#include "sled/superpixel.hpp"

namespace sled {

/// Everything produced by one superpixel scale: the SE partition, its
/// bisection, the healthy training set, and the outlier score map.
struct ScaleOutputBundle {
    int scale = 0;
    SuperpixelLabeling superpixels;
    Partition partition;
    BisectionResult bisection;
    std::vector<int> healthy_superpixels;
    ScoreMap map;
    double sigma2_b = 0.0;
    bool degenerate = false;
};

struct MultiScaleOutput {
    ScoreMap fused;
    LesionMask mask;
    bool all_degenerate = false;
    std::string warning;
    std::vector<ScaleOutputBundle> bundles;  // empty when keep_bundles is off
};

/// Full preprocessing chain at the configured target size.
RgbImage preprocess_for(const RgbImage& raw, const PipelineConfig& cfg);

/// SLIC -> graph -> SE minimization -> bisection -> iForest on the healthy
/// superpixels -> score map. Single-region partitions and healthy sets smaller
/// than two mark the bundle degenerate instead of aborting. The forest seed is
/// derived from the master seed and the scale value, so per-scale runs are
/// reproducible under any scheduling. When debug_dir is non-empty the sparse
/// graph and partition are dumped there as text.
ScaleOutputBundle run_single_scale(const RgbImage& img, int scale, const PipelineConfig& cfg,
                                   const std::string& debug_dir = "");

/// Runs every configured scale (all ms_scales in "ms" mode, just ss_scale in
/// "ss"), fuses the score maps, and binarizes: GHT threshold -> hole filling ->
/// Gaussian component selection. All scales degenerate yields an all-background
/// mask and a warning.
MultiScaleOutput run_multi_scale(const RgbImage& img, const PipelineConfig& cfg,
                                 bool keep_bundles = true, const std::string& debug_dir = "");

/// Lesion boundary (green, 1 px) drawn over the image.
RgbImage render_overlay(const RgbImage& img, const Mask& mask);

/// Nearest-neighbor mask resize (used to compare against ground truth stored
/// at a different resolution).
Mask resize_mask_nearest(const Mask& mask, int target_w, int target_h);

struct BatchOptions {
    std::string input_dir;
    std::string gt_dir;   // empty: no metrics
    std::string out_dir;
    int jobs = 0;         // <= 0: all hardware threads
};

/// Per image: preprocess, segment, write <stem>_mask.png / <stem>_score.png /
/// <stem>_overlay.png; with ground truth, also metrics.csv (one row per image
/// plus a mean row). Failures become CSV status rows and never abort the
/// batch. Returns the mean over the scored images.
MetricsReport run_batch(const BatchOptions& opts, const PipelineConfig& cfg);

/// Scores existing prediction masks against ground-truth masks and writes the
/// CSV report.
MetricsReport run_eval(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& out_csv);

/// Image files of a directory (PNG/JPEG), sorted by filename. Stems starting
/// with "gt_" are treated as ground-truth companions and skipped.
std::vector<std::string> list_input_images(const std::string& dir);

/// Ground-truth file for an image stem. Tries the img_* -> gt_* convention
/// and the mask-suffixed names (<stem>_segmentation.png, <stem>_gt.png,
/// <stem>_lesion.png) before the bare <stem>.{png,jpg,jpeg}; a candidate equal
/// to exclude_path (the input image itself, when ground truth shares its
/// directory) is skipped. Empty string when nothing matches.
std::string find_ground_truth(const std::string& gt_dir, const std::string& stem,
                              const std::string& exclude_path = "");

/// Loads a mask image (any decodable raster; pixels with luminance > 0.5 are
/// lesion).
Mask load_mask(const std::string& path);

} // namespace sled
