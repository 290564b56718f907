#include "sled/config.hpp"

#include <fstream>
#include <sstream>

#include "sled/errors.hpp"

namespace sled {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": '" + value + "'");
    }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_int(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

int parse_positive(const std::string& key, const std::string& value) {
    int v = parse_int(key, value);
    if (v <= 0) throw ConfigError("config: " + key + " must be positive");
    return v;
}

} // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "target_width")
        cfg.target_width = parse_positive(key, value);
    else if (key == "target_height")
        cfg.target_height = parse_positive(key, value);
    else if (key == "r")
        cfg.r = parse_double(key, value);
    else if (key == "sigma_k")
        cfg.sigma_k = parse_positive(key, value);
    else if (key == "sigma_mode") {
        if (value != "local" && value != "fixed")
            throw ConfigError("config: sigma_mode must be 'local' or 'fixed'");
        cfg.sigma_mode = value;
    } else if (key == "knn_k")
        cfg.knn_k = parse_positive(key, value);
    else if (key == "ss_scale")
        cfg.ss_scale = parse_positive(key, value);
    else if (key == "ms_scales") {
        cfg.ms_scales = parse_int_list(key, value);
        for (int s : cfg.ms_scales)
            if (s <= 0) throw ConfigError("config: ms_scales entries must be positive");
    } else if (key == "n_trees")
        cfg.n_trees = parse_positive(key, value);
    else if (key == "iforest_subsample") {
        cfg.iforest_subsample = parse_int(key, value);
        if (cfg.iforest_subsample < 0)
            throw ConfigError("config: iforest_subsample must be >= 0");
    } else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "ght_nu")
        cfg.ght_nu = value == "auto" ? -1.0 : parse_double(key, value);
    else if (key == "ght_kappa")
        cfg.ght_kappa = value == "auto" ? -1.0 : parse_double(key, value);
    else if (key == "ght_tau")
        cfg.ght_tau = parse_double(key, value);
    else if (key == "ght_omega")
        cfg.ght_omega = parse_double(key, value);
    else if (key == "mode") {
        if (value != "ss" && value != "ms")
            throw ConfigError("config: mode must be 'ss' or 'ms'");
        cfg.mode = value;
    } else if (key == "refine_scope") {
        if (value != "adjacent" && value != "all")
            throw ConfigError("config: refine_scope must be 'adjacent' or 'all'");
        cfg.refine_scope = value;
    } else if (key == "refine_max_iters")
        cfg.refine_max_iters = parse_positive(key, value);
    else if (key == "exec") {
        if (value != "serial" && value != "parallel")
            throw ConfigError("config: exec must be 'serial' or 'parallel'");
        cfg.exec = value;
    } else
        throw ConfigError("config: unknown key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " has no '='");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

} // namespace sled
