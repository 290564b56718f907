#include "sled/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sled/errors.hpp"

namespace sled {
namespace {

constexpr double kVarianceFloor = 1e-30;

struct SplitStats {
    // Prefix quantities over bin indices (x = bin index).
    std::vector<double> w, wx, wxx;
    double total_w = 0.0, total_wx = 0.0, total_wxx = 0.0;

    explicit SplitStats(const Histogram& hist) {
        w.resize(hist.size());
        wx.resize(hist.size());
        wxx.resize(hist.size());
        double cw = 0.0, cwx = 0.0, cwxx = 0.0;
        for (std::size_t k = 0; k < hist.size(); ++k) {
            const double n = hist[k];
            const double x = static_cast<double>(k);
            cw += n;
            cwx += n * x;
            cwxx += n * x * x;
            w[k] = cw;
            wx[k] = cwx;
            wxx[k] = cwxx;
        }
        total_w = cw;
        total_wx = cwx;
        total_wxx = cwxx;
    }

};

void check_histogram(const Histogram& hist) {
    int occ = 0;
    for (double n : hist) occ += n > 0.0;
    if (occ < 2) throw DegenerateHistogram("threshold: fewer than two occupied bins");
}

} // namespace

Histogram score_histogram(const ScoreMap& map) {
    Histogram hist{};
    for (float v : map.data) {
        int bin = static_cast<int>(v * 256.0f);
        bin = std::clamp(bin, 0, 255);
        hist[bin] += 1.0;
    }
    return hist;
}

int ght_split(const Histogram& hist, const GhtParams& params) {
    check_histogram(hist);
    SplitStats st(hist);
    const double n = st.total_w;
    // tau is given on the [0,1] score scale; the objective works in bin units.
    const double tau_bins = params.tau * 256.0;

    double best_f = -std::numeric_limits<double>::infinity();
    int best_t = -1;
    for (int t = 0; t < 255; ++t) {
        const double w0 = st.w[t];
        const double w1 = n - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double p0 = w0 / n, p1 = w1 / n;
        const double mu0 = st.wx[t] / w0;
        const double mu1 = (st.total_wx - st.wx[t]) / w1;
        const double d0 = std::max(0.0, st.wxx[t] - w0 * mu0 * mu0);
        const double d1 = std::max(0.0, (st.total_wxx - st.wxx[t]) - w1 * mu1 * mu1);

        const double v0 =
            std::max(kVarianceFloor,
                     (p0 * params.nu * tau_bins * tau_bins + d0) / (p0 * params.nu + w0));
        const double v1 =
            std::max(kVarianceFloor,
                     (p1 * params.nu * tau_bins * tau_bins + d1) / (p1 * params.nu + w1));
        const double f0 = -d0 / v0 - w0 * std::log(v0) +
                          2.0 * (w0 + params.kappa * params.omega) * std::log(w0);
        const double f1 = -d1 / v1 - w1 * std::log(v1) +
                          2.0 * (w1 + params.kappa * (1.0 - params.omega)) * std::log(w1);
        if (f0 + f1 > best_f) {
            best_f = f0 + f1;
            best_t = t;
        }
    }
    return best_t;
}

double ght_threshold(const Histogram& hist, const GhtParams& params) {
    return (ght_split(hist, params) + 1) / 256.0;
}

int otsu_threshold(const Histogram& hist) {
    check_histogram(hist);
    SplitStats st(hist);
    const double n = st.total_w;

    double best_sigma = -1.0;
    int best_t = -1;
    for (int t = 0; t < 255; ++t) {
        const double w0 = st.w[t];
        const double w1 = n - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double mu0 = st.wx[t] / w0;
        const double mu1 = (st.total_wx - st.wx[t]) / w1;
        const double diff = mu0 - mu1;
        const double sigma = w0 * w1 * diff * diff;  // sigma2_b scaled by n^2
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_t = t;
        }
    }
    return best_t;
}

int met_threshold(const Histogram& hist) {
    check_histogram(hist);
    SplitStats st(hist);
    const double n = st.total_w;

    double best_j = std::numeric_limits<double>::infinity();
    int best_t = -1;
    for (int t = 0; t < 255; ++t) {
        const double w0 = st.w[t];
        const double w1 = n - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double p0 = w0 / n, p1 = w1 / n;
        const double mu0 = st.wx[t] / w0;
        const double mu1 = (st.total_wx - st.wx[t]) / w1;
        const double var0 =
            std::max(kVarianceFloor, (st.wxx[t] - w0 * mu0 * mu0) / w0);
        const double var1 =
            std::max(kVarianceFloor, ((st.total_wxx - st.wxx[t]) - w1 * mu1 * mu1) / w1);
        const double j = 1.0 + p0 * std::log(var0) + p1 * std::log(var1) -
                         2.0 * (p0 * std::log(p0) + p1 * std::log(p1));
        if (j < best_j) {
            best_j = j;
            best_t = t;
        }
    }
    return best_t;
}

Mask threshold_scores(const ScoreMap& map, double threshold) {
    Mask out(map.width, map.height);
    for (std::size_t i = 0; i < map.data.size(); ++i)
        out.data[i] = map.data[i] >= threshold ? 1 : 0;
    return out;
}

Mask fill_holes(const Mask& mask) {
    const int h = mask.height, w = mask.width;
    std::vector<std::uint8_t> reachable(mask.data.size(), 0);
    std::vector<std::size_t> stack;
    auto push = [&](int r, int c) {
        std::size_t idx = static_cast<std::size_t>(r) * w + c;
        if (!reachable[idx] && !mask.data[idx]) {
            reachable[idx] = 1;
            stack.push_back(idx);
        }
    };
    for (int c = 0; c < w; ++c) {
        push(0, c);
        push(h - 1, c);
    }
    for (int r = 0; r < h; ++r) {
        push(r, 0);
        push(r, w - 1);
    }
    while (!stack.empty()) {
        std::size_t idx = stack.back();
        stack.pop_back();
        int r = static_cast<int>(idx / w), c = static_cast<int>(idx % w);
        if (r > 0) push(r - 1, c);
        if (r + 1 < h) push(r + 1, c);
        if (c > 0) push(r, c - 1);
        if (c + 1 < w) push(r, c + 1);
    }
    Mask out(w, h);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (mask.data[i] || !reachable[i]) ? 1 : 0;
    return out;
}

Mask select_component(const Mask& mask) {
    const int h = mask.height, w = mask.width;
    std::vector<int> comp(mask.data.size(), -1);
    std::vector<double> comp_score;
    const double cr = (h - 1) / 2.0;
    const double cc = (w - 1) / 2.0;
    const double sigma_g = 0.5 * std::min(h, w);
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma_g * sigma_g);

    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.data.size(); ++start) {
        if (!mask.data[start] || comp[start] >= 0) continue;
        const int cid = static_cast<int>(comp_score.size());
        comp_score.push_back(0.0);
        comp[start] = cid;
        stack.push_back(start);
        while (!stack.empty()) {
            std::size_t idx = stack.back();
            stack.pop_back();
            int r = static_cast<int>(idx / w), c = static_cast<int>(idx % w);
            const double dr = r - cr, dc = c - cc;
            comp_score[cid] += std::exp(-(dr * dr + dc * dc) * inv_two_sigma2);
            const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
            for (auto& nbp : nb) {
                if (nbp[0] < 0 || nbp[0] >= h || nbp[1] < 0 || nbp[1] >= w) continue;
                std::size_t q = static_cast<std::size_t>(nbp[0]) * w + nbp[1];
                if (mask.data[q] && comp[q] < 0) {
                    comp[q] = cid;
                    stack.push_back(q);
                }
            }
        }
    }
    if (comp_score.empty()) throw EmptyMask("select_component: mask has no lesion pixels");

    int best = 0;
    for (int cid = 1; cid < static_cast<int>(comp_score.size()); ++cid)
        if (comp_score[cid] > comp_score[best]) best = cid;  // ties keep the lowest label

    Mask out(w, h);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = comp[i] == best ? 1 : 0;
    return out;
}

} // namespace sled
