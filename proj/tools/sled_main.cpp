#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sled/config.hpp"
#include "sled/errors.hpp"
#include "sled/image_io.hpp"
#include "sled/metrics.hpp"
#include "sled/pipeline.hpp"
#include "sled/preprocess.hpp"
#include "sled/synthdata.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

sled::PipelineConfig make_config(const CommonOpts& opts) {
    sled::PipelineConfig cfg;
    if (!opts.config_path.empty()) cfg = sled::load_config(opts.config_path);
    if (!opts.mode.empty()) sled::apply_config_entry(cfg, "mode", opts.mode);
    if (opts.seed_set) cfg.seed = opts.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--mode", opts.mode, "ss or ms")->check(CLI::IsMember({"ss", "ms"}));
    cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
}

int cmd_segment(const std::string& image_path, const std::string& out_dir,
                const std::string& debug_dir, const CommonOpts& common) {
    sled::PipelineConfig cfg = make_config(common);
    sled::RgbImage raw = sled::load_image(image_path);
    sled::RgbImage pre = sled::preprocess_for(raw, cfg);
    sled::MultiScaleOutput result = sled::run_multi_scale(pre, cfg, true, debug_dir);
    if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";

    fs::create_directories(out_dir);
    std::string stem = fs::path(image_path).stem().string();
    fs::path base = fs::path(out_dir) / stem;
    sled::save_png(base.string() + "_mask.png", result.mask);
    sled::save_png(base.string() + "_score.png", result.fused);
    sled::RgbImage overlay_base =
        sled::resize(raw, cfg.target_width, cfg.target_height, cfg.exec_policy());
    sled::save_png(base.string() + "_overlay.png",
                   sled::render_overlay(overlay_base, result.mask));

    std::cout << "wrote " << base.string() << "_{mask,score,overlay}.png ("
              << result.mask.count() << " lesion pixels, mode " << cfg.mode << ")\n";
    return 0;
}

int cmd_batch(const std::string& in_dir, const std::string& gt_dir, const std::string& out_dir,
              int jobs, const CommonOpts& common) {
    sled::PipelineConfig cfg = make_config(common);
    sled::BatchOptions opts;
    opts.input_dir = in_dir;
    opts.gt_dir = gt_dir;
    opts.out_dir = out_dir;
    opts.jobs = jobs;
    sled::MetricsReport mean = sled::run_batch(opts, cfg);
    if (!gt_dir.empty())
        std::cout << "mean AC " << mean.ac << " SE " << mean.se << " SP " << mean.sp << " DI "
                  << mean.di << " JA " << mean.ja << "\n";
    return 0;
}

int cmd_eval(const std::string& pred_dir, const std::string& gt_dir, const std::string& out_csv) {
    sled::MetricsReport mean = sled::run_eval(pred_dir, gt_dir, out_csv);
    std::cout << "mean AC " << mean.ac << " SE " << mean.se << " SP " << mean.sp << " DI "
              << mean.di << " JA " << mean.ja << "\n";
    return 0;
}

int cmd_synth(int count, const std::string& out_dir, std::uint64_t seed, int width, int height,
              double noise, double vignette, int hairs) {
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        int subregions = 1 + i % 4;
        sled::SyntheticSpec spec = sled::random_spec(width, height, sled::mix_seed(seed, i),
                                                     subregions, noise, vignette, hairs);
        auto [img, gt] = sled::generate(spec);
        char name[32];
        std::snprintf(name, sizeof(name), "img_%03d.png", i);
        sled::save_png((fs::path(out_dir) / name).string(), img);
        std::snprintf(name, sizeof(name), "gt_%03d.png", i);
        sled::save_png((fs::path(out_dir) / name).string(), gt);
    }
    std::cout << "wrote " << count << " image/mask pairs to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLED: unsupervised skin lesion segmentation"};
    app.require_subcommand(1);

    CommonOpts seg_common, batch_common;
    std::string seg_image, seg_out = "out", seg_debug;
    auto* segment = app.add_subcommand("segment", "segment a single image");
    segment->add_option("image", seg_image, "input image (PNG/JPEG)")->required();
    segment->add_option("--out", seg_out, "output directory");
    segment->add_option("--debug-dump", seg_debug, "directory for graph/partition dumps");
    add_common(segment, seg_common);

    std::string batch_in, batch_gt, batch_out;
    int batch_jobs = 0;
    auto* batch = app.add_subcommand("batch", "segment a directory of images");
    batch->add_option("input_dir", batch_in, "directory of input images")->required();
    batch->add_option("--gt", batch_gt, "ground-truth mask directory");
    batch->add_option("--out", batch_out, "output directory")->required();
    batch->add_option("--jobs", batch_jobs, "parallel image workers (0 = all cores)");
    add_common(batch, batch_common);

    std::string eval_pred, eval_gt, eval_out;
    auto* eval = app.add_subcommand("eval", "score prediction masks against ground truth");
    eval->add_option("pred_dir", eval_pred, "directory of prediction masks")->required();
    eval->add_option("gt_dir", eval_gt, "directory of ground-truth masks")->required();
    eval->add_option("--out", eval_out, "CSV report path")->required();

    int synth_n = 10, synth_w = 768, synth_h = 560, synth_hairs = 0;
    std::uint64_t synth_seed = 0;
    double synth_noise = 0.02, synth_vignette = 0.15;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate synthetic images with ground truth");
    synth->add_option("--n", synth_n, "number of images")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--width", synth_w, "image width");
    synth->add_option("--height", synth_h, "image height");
    synth->add_option("--noise", synth_noise, "Gaussian pixel noise sigma");
    synth->add_option("--vignette", synth_vignette, "radial vignette strength");
    synth->add_option("--hairs", synth_hairs, "hair strokes per image");

    CLI11_PARSE(app, argc, argv);

    try {
        if (segment->parsed()) return cmd_segment(seg_image, seg_out, seg_debug, seg_common);
        if (batch->parsed())
            return cmd_batch(batch_in, batch_gt, batch_out, batch_jobs, batch_common);
        if (eval->parsed()) return cmd_eval(eval_pred, eval_gt, eval_out);
        if (synth->parsed())
            return cmd_synth(synth_n, synth_out, synth_seed, synth_w, synth_h, synth_noise,
                             synth_vignette, synth_hairs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
