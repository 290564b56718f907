#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sled/parallel.hpp"

namespace sled {

/// Pipeline parameters. Defaults follow the reference setup: 768x560 input,
/// r=0.3, sigma 30, K=50, single scale 400, multi-scale 200..700 step 50.
struct PipelineConfig {
    int target_width = 768;
    int target_height = 560;
    double r = 0.3;
    int sigma_k = 30;
    std::string sigma_mode = "local";  // "local" (neighbor index) or "fixed"
    int knn_k = 50;
    int ss_scale = 400;
    std::vector<int> ms_scales = {200, 250, 300, 350, 400, 450, 500, 550, 600, 650, 700};
    int n_trees = 100;
    int iforest_subsample = 256;  // 0 = train every tree on all healthy points
    std::uint64_t seed = 0;
    double ght_nu = -1.0;     // < 0: auto (10 * pixel count)
    double ght_kappa = -1.0;  // < 0: auto (0.1 * pixel count)
    double ght_tau = 0.1;     // on the [0,1] score scale
    double ght_omega = 0.5;
    std::string mode = "ms";           // "ss" or "ms"
    std::string refine_scope = "adjacent";  // or "all"
    int refine_max_iters = 100;
    std::string exec = "parallel";  // or "serial"

    Exec exec_policy() const { return exec == "serial" ? Exec::serial : Exec::parallel; }
    std::vector<int> scales_for_mode() const {
        return mode == "ss" ? std::vector<int>{ss_scale} : ms_scales;
    }
};

/// Parses a flat key=value file ('#' starts a comment). Keys must exactly
/// match PipelineConfig field names; unknown keys throw ConfigError.
PipelineConfig load_config(const std::string& path);

/// Applies one key=value pair; shared by the file parser and tests.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

} // namespace sled
