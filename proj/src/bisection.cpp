#include "sled/bisection.hpp"

#include <algorithm>
#include <numeric>

#include "sled/errors.hpp"

namespace sled {

std::vector<RegionIntensity> region_intensities(const RgbImage& img, const SuperpixelLabeling& sp,
                                                const Partition& p, Channel channel) {
    const int L = p.n_modules();
    const int ch = static_cast<int>(channel);
    std::vector<double> sum(L, 0.0);
    std::vector<long long> count(L, 0);

    std::size_t i = 0;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c, ++i) {
            int region = p.assignment[sp.labels[i]];
            sum[region] += img.data[3 * i + ch];
            ++count[region];
        }
    }
    const double m = static_cast<double>(img.n_pixels());
    std::vector<RegionIntensity> out(L);
    for (int x = 0; x < L; ++x) {
        out[x].region = x;
        out[x].omega = count[x] / m;
        out[x].mu = count[x] > 0 ? sum[x] / count[x] : 0.0;
    }
    return out;
}

BisectSplit bisect(const std::vector<RegionIntensity>& regions) {
    const int L = static_cast<int>(regions.size());
    if (L < 2) throw SingleRegion("bisect: need at least two regions");

    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (regions[a].mu != regions[b].mu) return regions[a].mu < regions[b].mu;
        return regions[a].region < regions[b].region;
    });

    // mu_T is fixed; scan prefix sums over the sorted order.
    double mu_t = 0.0;
    for (const auto& reg : regions) mu_t += reg.omega * reg.mu;

    double best_sigma = -1.0;
    int best_split = 0;
    double w0 = 0.0, m0 = 0.0;
    for (int s = 0; s < L - 1; ++s) {
        w0 += regions[order[s]].omega;
        m0 += regions[order[s]].omega * regions[order[s]].mu;
        const double w1 = 1.0 - w0;
        const double m1 = mu_t - m0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        // Eq.-style class means are omega-weighted sums; the variance uses the
        // normalized means.
        const double mu0 = m0 / w0;
        const double mu1 = m1 / w1;
        const double sigma =
            w0 * (mu0 - mu_t) * (mu0 - mu_t) + w1 * (mu1 - mu_t) * (mu1 - mu_t);
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_split = s;
        }
    }

    BisectSplit out;
    out.sigma2_b = best_sigma;
    out.threshold_tau =
        0.5 * (regions[order[best_split]].mu + regions[order[best_split + 1]].mu);
    for (int s = 0; s < L; ++s) {
        if (s <= best_split)
            out.lesion.push_back(regions[order[s]].region);
        else
            out.healthy.push_back(regions[order[s]].region);
    }
    std::sort(out.lesion.begin(), out.lesion.end());
    std::sort(out.healthy.begin(), out.healthy.end());
    return out;
}

BisectionResult select_channel(const RgbImage& img, const SuperpixelLabeling& sp,
                               const Partition& p) {
    BisectionResult best;
    bool have = false;
    for (Channel ch : {Channel::R, Channel::G, Channel::B}) {
        auto regions = region_intensities(img, sp, p, ch);
        BisectSplit split = bisect(regions);  // SingleRegion propagates
        if (!have || split.sigma2_b > best.sigma2_b) {
            have = true;
            best.channel = ch;
            best.threshold_tau = split.threshold_tau;
            best.lesion_regions = std::move(split.lesion);
            best.healthy_regions = std::move(split.healthy);
            best.sigma2_b = split.sigma2_b;
        }
    }
    return best;
}

} // namespace sled
