#include "sled/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sled/parallel.hpp"

namespace sled {
namespace {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + uniform_open01(rng()) * (hi - lo);
}

// Box-Muller on hand-rolled uniforms; keeps generation independent of the
// standard library's normal_distribution implementation.
struct GaussianSource {
    std::mt19937_64& rng;
    bool have_spare = false;
    double spare = 0.0;

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform_open01(rng());
        double u2 = uniform_open01(rng());
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare = mag * std::sin(2.0 * M_PI * u2);
        have_spare = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }
};

void draw_hair(RgbImage& img, std::mt19937_64& rng) {
    const int h = img.height, w = img.width;
    // Quadratic bezier with random endpoints and control point.
    double x0 = uniform_in(rng, 0, w - 1), y0 = uniform_in(rng, 0, h - 1);
    double x1 = uniform_in(rng, 0, w - 1), y1 = uniform_in(rng, 0, h - 1);
    double cx = uniform_in(rng, 0, w - 1), cy = uniform_in(rng, 0, h - 1);
    double shade = uniform_in(rng, 0.05, 0.2);
    int thickness = rng() % 2;  // radius 0 or 1 -> 1..3 px wide strokes

    const int steps = 2 * (w + h);
    for (int s = 0; s <= steps; ++s) {
        double t = static_cast<double>(s) / steps;
        double omt = 1.0 - t;
        double x = omt * omt * x0 + 2 * omt * t * cx + t * t * x1;
        double y = omt * omt * y0 + 2 * omt * t * cy + t * t * y1;
        int r = static_cast<int>(std::lround(y));
        int c = static_cast<int>(std::lround(x));
        for (int dr = -thickness; dr <= thickness; ++dr)
            for (int dc = -thickness; dc <= thickness; ++dc) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                float* p = img.px(rr, cc);
                p[0] = p[1] = p[2] = static_cast<float>(shade);
            }
    }
}

} // namespace

SyntheticSpec random_spec(int width, int height, std::uint64_t seed, int n_subregions,
                          double noise_sigma, double vignette, int hair_count) {
    std::mt19937_64 rng(mix_seed(seed, 0x5EED));
    SyntheticSpec spec;
    spec.width = width;
    spec.height = height;
    spec.seed = seed;
    spec.n_subregions = n_subregions;
    spec.noise_sigma = noise_sigma;
    spec.vignette = vignette;
    spec.hair_count = hair_count;

    const double ext = std::min(width, height);
    spec.axis_a = uniform_in(rng, 0.15, 0.30) * ext;
    spec.axis_b = uniform_in(rng, 0.15, 0.30) * ext;
    spec.rotation = uniform_in(rng, 0.0, M_PI);

    const double max_axis = std::max(spec.axis_a, spec.axis_b);
    const double margin = max_axis + 8.0;
    spec.center_row = std::clamp(height / 2.0 + uniform_in(rng, -0.1, 0.1) * height, margin,
                                 height - margin);
    spec.center_col = std::clamp(width / 2.0 + uniform_in(rng, -0.1, 0.1) * width, margin,
                                 width - margin);

    double channels[3] = {uniform_in(rng, 0.65, 0.85), uniform_in(rng, 0.65, 0.85),
                          uniform_in(rng, 0.65, 0.85)};
    std::sort(channels, channels + 3, std::greater<>());  // R >= G >= B
    spec.background = {channels[0], channels[1], channels[2]};

    spec.subregion_offsets.clear();
    double offset = uniform_in(rng, -0.28, -0.20);
    for (int k = 0; k < n_subregions; ++k) {
        spec.subregion_offsets.push_back(std::max(offset, -0.55));
        offset -= uniform_in(rng, 0.05, 0.12);
    }
    return spec;
}

std::pair<RgbImage, LesionMask> generate(const SyntheticSpec& spec) {
    const int h = spec.height, w = spec.width;
    RgbImage img(w, h);
    LesionMask gt(w, h);

    const double cos_t = std::cos(spec.rotation), sin_t = std::sin(spec.rotation);
    const double img_cr = (h - 1) / 2.0, img_cc = (w - 1) / 2.0;
    const double max_d2 = img_cr * img_cr + img_cc * img_cc;
    const int n_sub = std::max<int>(1, spec.n_subregions);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double dy = r - spec.center_row, dx = c - spec.center_col;
            const double xr = dx * cos_t + dy * sin_t;
            const double yr = -dx * sin_t + dy * cos_t;
            const double rho =
                std::sqrt((xr / spec.axis_a) * (xr / spec.axis_a) +
                          (yr / spec.axis_b) * (yr / spec.axis_b));

            double offset = 0.0;
            if (rho < 1.0) {
                gt.at(r, c) = 1;
                int idx = std::min(n_sub - 1, static_cast<int>((1.0 - rho) * n_sub));
                if (!spec.subregion_offsets.empty())
                    offset = spec.subregion_offsets[std::min<std::size_t>(
                        idx, spec.subregion_offsets.size() - 1)];
                else
                    offset = -0.25;
            }

            const double vr = r - img_cr, vc = c - img_cc;
            const double vig = 1.0 - spec.vignette * (vr * vr + vc * vc) / max_d2;
            float* p = img.px(r, c);
            for (int ch = 0; ch < 3; ++ch)
                p[ch] = static_cast<float>(
                    std::clamp((spec.background[ch] + offset) * vig, 0.0, 1.0));
        }
    }

    std::mt19937_64 rng(mix_seed(spec.seed, 0xA11CE));
    for (int k = 0; k < spec.hair_count; ++k) draw_hair(img, rng);

    if (spec.noise_sigma > 0.0) {
        GaussianSource gauss{rng};
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            double v = img.data[i] + gauss.next() * spec.noise_sigma;
            img.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return {std::move(img), std::move(gt)};
}

} // namespace sled
