#include "sled/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sled/errors.hpp"

namespace sled {

double scale_weight(double sigma2_b, double min_sigma2_b) {
    const double denom = std::max(min_sigma2_b, 1e-6);
    const double exponent = std::min((sigma2_b - min_sigma2_b) / denom, 50.0);
    return std::exp(exponent);
}

ScoreMap integrate(const std::vector<ScaleResult>& results, Exec exec) {
    std::vector<const ScaleResult*> active;
    for (const auto& r : results)
        if (!r.degenerate) active.push_back(&r);
    if (active.empty()) throw AllScalesDegenerate("integrate: every scale is degenerate");

    const int w = active.front()->map.width;
    const int h = active.front()->map.height;
    for (const auto* r : active)
        if (r->map.width != w || r->map.height != h)
            throw DimensionMismatch("integrate: score map sizes differ");

    double min_sigma = std::numeric_limits<double>::max();
    for (const auto* r : active) min_sigma = std::min(min_sigma, r->sigma2_b);
    std::vector<double> weights(active.size());
    double weight_sum = 0.0;
    for (std::size_t s = 0; s < active.size(); ++s) {
        weights[s] = scale_weight(active[s]->sigma2_b, min_sigma);
        weight_sum += weights[s];
    }

    ScoreMap out(w, h);
    const std::size_t n = out.data.size();
    auto fuse = [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t s = 0; s < active.size(); ++s)
            acc += weights[s] * active[s]->map.data[i];
        out.data[i] = static_cast<float>(acc / weight_sum);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) fuse(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fuse(i);
    }
    return out;
}

} // namespace sled
