#include "sled/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sled/errors.hpp"
#include "sled/graph.hpp"
#include "sled/image_io.hpp"
#include "sled/isolation_forest.hpp"
#include "sled/postprocess.hpp"
#include "sled/preprocess.hpp"

namespace fs = std::filesystem;

namespace sled {
namespace {

GhtParams ght_params_for(const PipelineConfig& cfg, std::size_t n_pixels) {
    // Auto nu sits in the interpolation regime (variances shrunk hard toward
    // tau^2) and auto kappa keeps a mild balance prior; both were calibrated
    // on the synthetic acceptance corpus.
    GhtParams p;
    p.nu = cfg.ght_nu < 0.0 ? 10.0 * static_cast<double>(n_pixels) : cfg.ght_nu;
    p.kappa = cfg.ght_kappa < 0.0 ? 0.1 * static_cast<double>(n_pixels) : cfg.ght_kappa;
    p.tau = cfg.ght_tau;
    p.omega = cfg.ght_omega;
    return p;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_image_file(const fs::path& p) {
    std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

int effective_jobs(int jobs) {
#ifdef _OPENMP
    return jobs > 0 ? jobs : omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

} // namespace

RgbImage preprocess_for(const RgbImage& raw, const PipelineConfig& cfg) {
    return preprocess_image(raw, cfg.target_width, cfg.target_height, cfg.exec_policy());
}

ScaleOutputBundle run_single_scale(const RgbImage& img, int scale, const PipelineConfig& cfg,
                                   const std::string& debug_dir) {
    const Exec exec = cfg.exec_policy();
    ScaleOutputBundle bundle;
    bundle.scale = scale;
    bundle.superpixels = slic_segment(img, scale, {10, 10.0, exec});

    GraphParams gp;
    gp.r = cfg.r;
    gp.sigma_k = cfg.sigma_k;
    gp.fixed_sigma = cfg.sigma_mode == "fixed";
    gp.exec = exec;
    SuperpixelGraph graph;
    try {
        graph = build_graph(bundle.superpixels, gp);
    } catch (const DisconnectedNode&) {
        graph = build_graph_reconnected(bundle.superpixels, gp);
    }
    graph = knn_sparsify(graph, cfg.knn_k);

    MinimizeOptions mopts;
    mopts.max_refine_iters = cfg.refine_max_iters;
    mopts.adjacent_only = cfg.refine_scope != "all";
    bundle.partition = minimize(graph, mopts);

    if (!debug_dir.empty()) {
        fs::create_directories(debug_dir);
        std::ofstream ge(fs::path(debug_dir) / ("scale_" + std::to_string(scale) + "_graph.txt"));
        dump_edges(graph, ge);
        std::ofstream pe(fs::path(debug_dir) /
                         ("scale_" + std::to_string(scale) + "_partition.txt"));
        dump_partition(bundle.partition, pe);
    }

    try {
        bundle.bisection = select_channel(img, bundle.superpixels, bundle.partition);
    } catch (const SingleRegion&) {
        bundle.degenerate = true;
        return bundle;
    }
    if (bundle.bisection.sigma2_b <= 0.0) {
        // Zero between-class variance on every channel: the regions are
        // indistinguishable and the "healthy" side is arbitrary.
        bundle.degenerate = true;
        return bundle;
    }
    bundle.sigma2_b = bundle.bisection.sigma2_b;

    for (int region : bundle.bisection.healthy_regions)
        for (int node : bundle.partition.modules[region])
            bundle.healthy_superpixels.push_back(node);
    std::sort(bundle.healthy_superpixels.begin(), bundle.healthy_superpixels.end());

    std::vector<std::array<double, 3>> features;
    features.reserve(bundle.healthy_superpixels.size());
    for (int sp_id : bundle.healthy_superpixels)
        features.push_back(bundle.superpixels.means[sp_id]);

    try {
        IsolationForest forest = fit_forest(features, cfg.n_trees, mix_seed(cfg.seed, scale),
                                            cfg.iforest_subsample, exec);
        bundle.map = score_map(forest, bundle.superpixels, exec);
    } catch (const TooFewSamples&) {
        bundle.degenerate = true;
    }
    return bundle;
}

MultiScaleOutput run_multi_scale(const RgbImage& img, const PipelineConfig& cfg,
                                 bool keep_bundles, const std::string& debug_dir) {
    const std::vector<int> scales = cfg.scales_for_mode();
    MultiScaleOutput out;

    std::vector<ScaleResult> results(scales.size());
    std::vector<ScaleOutputBundle> bundles(scales.size());
    std::vector<std::exception_ptr> errors(scales.size());
    // Exceptions must not escape the parallel region; capture and rethrow.
    auto run_scale = [&](std::size_t i) {
        try {
            ScaleOutputBundle b = run_single_scale(img, scales[i], cfg, debug_dir);
            results[i] = {b.scale, b.map, b.sigma2_b, b.degenerate};
            if (keep_bundles)
                bundles[i] = std::move(b);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (cfg.exec_policy() == Exec::parallel && scales.size() > 1) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(scales.size()); ++i)
            run_scale(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < scales.size(); ++i) run_scale(i);
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    if (keep_bundles) out.bundles = std::move(bundles);

    try {
        out.fused = integrate(results, cfg.exec_policy());
    } catch (const AllScalesDegenerate&) {
        out.all_degenerate = true;
        out.warning = "all scales degenerate; emitting background-only mask";
        out.fused = ScoreMap(img.width, img.height, 0.0f);
        out.mask = Mask(img.width, img.height, 0);
        return out;
    }

    double threshold = 0.5;
    try {
        threshold = ght_threshold(score_histogram(out.fused), ght_params_for(cfg, img.n_pixels()));
    } catch (const DegenerateHistogram&) {
        // constant score map; 0.5 keeps the mask empty or full as-is
    }
    Mask binary = threshold_scores(out.fused, threshold);
    binary = fill_holes(binary);
    try {
        out.mask = select_component(binary);
    } catch (const EmptyMask&) {
        out.mask = Mask(img.width, img.height, 0);
        out.warning = "threshold produced an empty mask";
    }
    return out;
}

RgbImage render_overlay(const RgbImage& img, const Mask& mask) {
    RgbImage out = img;
    const int h = img.height, w = img.width;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            bool boundary = r == 0 || r == h - 1 || c == 0 || c == w - 1 ||
                            !mask.at(r - 1, c) || !mask.at(r + 1, c) || !mask.at(r, c - 1) ||
                            !mask.at(r, c + 1);
            if (boundary) {
                float* p = out.px(r, c);
                p[0] = 0.0f;
                p[1] = 1.0f;
                p[2] = 0.0f;
            }
        }
    }
    return out;
}

Mask resize_mask_nearest(const Mask& mask, int target_w, int target_h) {
    Mask out(target_w, target_h);
    for (int r = 0; r < target_h; ++r) {
        int sr = std::min(mask.height - 1,
                          static_cast<int>((r + 0.5) * mask.height / target_h));
        for (int c = 0; c < target_w; ++c) {
            int sc = std::min(mask.width - 1,
                              static_cast<int>((c + 0.5) * mask.width / target_w));
            out.at(r, c) = mask.at(sr, sc);
        }
    }
    return out;
}

std::vector<std::string> list_input_images(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        if (entry.path().stem().string().rfind("gt_", 0) == 0) continue;
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string find_ground_truth(const std::string& gt_dir, const std::string& stem,
                              const std::string& exclude_path) {
    // Mask-specific names first so an image is never matched against itself
    // when the ground truth sits in the input directory.
    std::vector<std::string> candidates;
    if (stem.rfind("img", 0) == 0) candidates.push_back("gt" + stem.substr(3) + ".png");
    candidates.insert(candidates.end(),
                      {stem + "_segmentation.png", stem + "_gt.png", stem + "_lesion.png",
                       stem + ".png", stem + ".jpg", stem + ".jpeg"});
    for (const auto& name : candidates) {
        fs::path p = fs::path(gt_dir) / name;
        if (!fs::exists(p)) continue;
        if (!exclude_path.empty() && fs::equivalent(p, fs::path(exclude_path))) continue;
        return p.string();
    }
    return "";
}

Mask load_mask(const std::string& path) {
    RgbImage img = load_image(path);
    GrayImage lum = luminance(img);
    Mask out(img.width, img.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = lum.data[i] > 0.5f ? 1 : 0;
    return out;
}

MetricsReport run_batch(const BatchOptions& opts, const PipelineConfig& cfg) {
    fs::create_directories(opts.out_dir);
    std::vector<std::string> files = list_input_images(opts.input_dir);
    if (files.empty())
        std::cerr << "warning: no input images found in " << opts.input_dir << "\n";

    std::vector<CsvRow> rows(files.size());
    const int jobs = effective_jobs(opts.jobs);

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(files.size()); ++i) {
        const fs::path path(files[i]);
        const std::string stem = path.stem().string();
        CsvRow row;
        row.image = stem;
        try {
            RgbImage raw = load_image(files[i]);
            RgbImage pre = preprocess_for(raw, cfg);
            MultiScaleOutput result = run_multi_scale(pre, cfg, /*keep_bundles=*/false);
            if (!result.warning.empty()) {
#pragma omp critical(sled_batch_log)
                std::cerr << "warning: " << stem << ": " << result.warning << "\n";
            }

            fs::path out_base = fs::path(opts.out_dir) / stem;
            save_png(out_base.string() + "_mask.png", result.mask);
            save_png(out_base.string() + "_score.png", result.fused);
            RgbImage base = resize(raw, cfg.target_width, cfg.target_height, cfg.exec_policy());
            save_png(out_base.string() + "_overlay.png", render_overlay(base, result.mask));

            if (!opts.gt_dir.empty()) {
                std::string gt_path = find_ground_truth(opts.gt_dir, stem, files[i]);
                if (gt_path.empty()) {
                    row.status = "no_gt";
                } else {
                    Mask gt = load_mask(gt_path);
                    Mask pred = result.mask;
                    if (pred.width != gt.width || pred.height != gt.height)
                        pred = resize_mask_nearest(pred, gt.width, gt.height);
                    row.metrics = compute(confusion(pred, gt));
                    row.has_metrics = true;
                }
            }
        } catch (const std::exception& e) {
            row.status = std::string("error:") + e.what();
#pragma omp critical(sled_batch_log)
            std::cerr << "error: " << stem << ": " << e.what() << "\n";
        }
        rows[i] = std::move(row);
    }

    MetricsReport mean;
    int counted = 0;
    for (const auto& row : rows) {
        if (!row.has_metrics) continue;
        mean.ac += row.metrics.ac;
        mean.se += row.metrics.se;
        mean.sp += row.metrics.sp;
        mean.di += row.metrics.di;
        mean.ja += row.metrics.ja;
        ++counted;
    }
    if (counted > 0) {
        mean.ac /= counted;
        mean.se /= counted;
        mean.sp /= counted;
        mean.di /= counted;
        mean.ja /= counted;
    }

    if (!opts.gt_dir.empty()) {
        std::ofstream csv(fs::path(opts.out_dir) / "metrics.csv");
        write_csv(csv, rows);
    }
    return mean;
}

MetricsReport run_eval(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& out_csv) {
    std::vector<CsvRow> rows;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(pred_dir)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        std::string stem = entry.path().stem().string();
        if (stem.size() > 6 && stem.substr(stem.size() - 6) == "_score") continue;
        if (stem.size() > 8 && stem.substr(stem.size() - 8) == "_overlay") continue;
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());

    MetricsReport mean;
    int counted = 0;
    for (const auto& file : files) {
        std::string stem = fs::path(file).stem().string();
        if (stem.size() > 5 && stem.substr(stem.size() - 5) == "_mask")
            stem = stem.substr(0, stem.size() - 5);
        CsvRow row;
        row.image = stem;
        std::string gt_path = find_ground_truth(gt_dir, stem, file);
        if (gt_path.empty()) {
            row.status = "no_gt";
        } else {
            try {
                Mask pred = load_mask(file);
                Mask gt = load_mask(gt_path);
                if (pred.width != gt.width || pred.height != gt.height)
                    pred = resize_mask_nearest(pred, gt.width, gt.height);
                row.metrics = compute(confusion(pred, gt));
                row.has_metrics = true;
                mean.ac += row.metrics.ac;
                mean.se += row.metrics.se;
                mean.sp += row.metrics.sp;
                mean.di += row.metrics.di;
                mean.ja += row.metrics.ja;
                ++counted;
            } catch (const std::exception& e) {
                row.status = std::string("error:") + e.what();
            }
        }
        rows.push_back(std::move(row));
    }
    if (counted > 0) {
        mean.ac /= counted;
        mean.se /= counted;
        mean.sp /= counted;
        mean.di /= counted;
        mean.ja /= counted;
    }
    if (!out_csv.empty()) {
        std::ofstream csv(out_csv);
        write_csv(csv, rows);
    }
    return mean;
}

} // namespace sled
