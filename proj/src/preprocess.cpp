#include "sled/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "sled/errors.hpp"

namespace sled {
namespace {

float bilinear_sample(const RgbImage& img, float r, float c, int ch) {
    int r0 = static_cast<int>(std::floor(r));
    int c0 = static_cast<int>(std::floor(c));
    float fr = r - r0;
    float fc = c - c0;
    int r1 = std::min(r0 + 1, img.height - 1);
    int c1 = std::min(c0 + 1, img.width - 1);
    r0 = std::clamp(r0, 0, img.height - 1);
    c0 = std::clamp(c0, 0, img.width - 1);
    float v00 = img.px(r0, c0)[ch], v01 = img.px(r0, c1)[ch];
    float v10 = img.px(r1, c0)[ch], v11 = img.px(r1, c1)[ch];
    float top = v00 + fc * (v01 - v00);
    float bot = v10 + fc * (v11 - v10);
    return top + fr * (bot - top);
}

void resize_row(const RgbImage& img, RgbImage& out, int r, float sr, float sc) {
    for (int c = 0; c < out.width; ++c) {
        float src_r = (r + 0.5f) * sr - 0.5f;
        float src_c = (c + 0.5f) * sc - 0.5f;
        float* dst = out.px(r, c);
        for (int ch = 0; ch < 3; ++ch)
            dst[ch] = std::clamp(bilinear_sample(img, src_r, src_c, ch), 0.0f, 1.0f);
    }
}

// Per-row partial sums merged in row order, so serial and parallel paths
// produce identical bits.
std::array<double, 3> channel_power6_means(const RgbImage& img, Exec exec) {
    const int h = img.height, w = img.width;
    std::vector<std::array<double, 3>> row_sums(h, {0.0, 0.0, 0.0});
    auto row_sum = [&](int r) {
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        const float* p = img.px(r, 0);
        for (int c = 0; c < w; ++c, p += 3) {
            for (int ch = 0; ch < 3; ++ch) {
                double x = p[ch];
                double x2 = x * x;
                acc[ch] += x2 * x2 * x2;
            }
        }
        row_sums[r] = acc;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < h; ++r) row_sum(r);
    } else {
        for (int r = 0; r < h; ++r) row_sum(r);
    }
    std::array<double, 3> total{0.0, 0.0, 0.0};
    for (int r = 0; r < h; ++r)
        for (int ch = 0; ch < 3; ++ch) total[ch] += row_sums[r][ch];
    const double m = static_cast<double>(img.n_pixels());
    for (int ch = 0; ch < 3; ++ch) total[ch] /= m;
    return total;
}

const int kLineHalfLen = 7;     // 15-pixel structuring elements
const float kHairThreshold = 0.1f;
const float kCornerLuminance = 0.08f;

GrayImage morph_line(const GrayImage& img, int dir_r, int dir_c, int half_len, bool dilate,
                     Exec exec) {
    const int h = img.height, w = img.width;
    GrayImage out(w, h);
    auto run_row = [&](int r) {
        for (int c = 0; c < w; ++c) {
            float best = img.at(r, c);
            for (int t = -half_len; t <= half_len; ++t) {
                int rr = r + t * dir_r;
                int cc = c + t * dir_c;
                if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                float v = img.at(rr, cc);
                best = dilate ? std::max(best, v) : std::min(best, v);
            }
            out.at(r, c) = best;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < h; ++r) run_row(r);
    } else {
        for (int r = 0; r < h; ++r) run_row(r);
    }
    return out;
}

} // namespace

RgbImage resize(const RgbImage& img, int target_w, int target_h, Exec exec) {
    if (target_w <= 0 || target_h <= 0) throw DegenerateImage("resize: non-positive target size");
    RgbImage out(target_w, target_h);
    const float sr = static_cast<float>(img.height) / target_h;
    const float sc = static_cast<float>(img.width) / target_w;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < target_h; ++r) resize_row(img, out, r, sr, sc);
    } else {
        for (int r = 0; r < target_h; ++r) resize_row(img, out, r, sr, sc);
    }
    return out;
}

RgbImage shades_of_gray(const RgbImage& img, Exec exec) {
    std::array<double, 3> p6 = channel_power6_means(img, exec);
    std::array<double, 3> illum;
    for (int ch = 0; ch < 3; ++ch) {
        illum[ch] = std::pow(p6[ch], 1.0 / 6.0);
        if (illum[ch] <= 0.0)
            throw DegenerateImage("shades_of_gray: channel identically zero");
    }
    const double mean_e = (illum[0] + illum[1] + illum[2]) / 3.0;
    std::array<float, 3> gain;
    for (int ch = 0; ch < 3; ++ch) gain[ch] = static_cast<float>(mean_e / illum[ch]);

    RgbImage out(img.width, img.height);
    const std::size_t n = img.n_pixels();
    auto run = [&](std::size_t i) {
        for (int ch = 0; ch < 3; ++ch)
            out.data[3 * i + ch] = std::clamp(img.data[3 * i + ch] * gain[ch], 0.0f, 1.0f);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) run(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) run(i);
    }
    return out;
}

GrayImage morph_close_line(const GrayImage& img, int dir_r, int dir_c, int half_len, Exec exec) {
    GrayImage dilated = morph_line(img, dir_r, dir_c, half_len, true, exec);
    return morph_line(dilated, dir_r, dir_c, half_len, false, exec);
}

ArtifactMask detect_hairs(const RgbImage& img, Exec exec) {
    GrayImage lum = luminance(img);
    const int h = img.height, w = img.width;
    static const int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};

    GrayImage response(w, h, 0.0f);
    for (auto& d : kDirs) {
        GrayImage closed = morph_close_line(lum, d[0], d[1], kLineHalfLen, exec);
        for (std::size_t i = 0; i < response.data.size(); ++i)
            response.data[i] = std::max(response.data[i], closed.data[i] - lum.data[i]);
    }

    Mask raw(w, h);
    for (std::size_t i = 0; i < raw.data.size(); ++i)
        raw.data[i] = response.data[i] > kHairThreshold ? 1 : 0;

    // 3x3 dilation so inpainting erases the full stroke width.
    Mask out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::uint8_t v = 0;
            for (int dr = -1; dr <= 1 && !v; ++dr)
                for (int dc = -1; dc <= 1 && !v; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < h && cc >= 0 && cc < w && raw.at(rr, cc)) v = 1;
                }
            out.at(r, c) = v;
        }
    }
    return out;
}

ArtifactMask mask_dark_corners(const RgbImage& img) {
    GrayImage lum = luminance(img);
    const int h = img.height, w = img.width;
    Mask out(w, h);
    std::vector<std::uint8_t> visited(lum.data.size(), 0);
    const int corners[4][2] = {{0, 0}, {0, w - 1}, {h - 1, 0}, {h - 1, w - 1}};

    std::queue<std::pair<int, int>> q;
    for (auto& cr : corners) {
        int r = cr[0], c = cr[1];
        std::size_t idx = static_cast<std::size_t>(r) * w + c;
        if (lum.at(r, c) < kCornerLuminance && !visited[idx]) {
            visited[idx] = 1;
            q.push({r, c});
        }
    }
    while (!q.empty()) {
        auto [r, c] = q.front();
        q.pop();
        out.at(r, c) = 1;
        const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (auto& n : nb) {
            int rr = n[0], cc = n[1];
            if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
            std::size_t idx = static_cast<std::size_t>(rr) * w + cc;
            if (!visited[idx] && lum.at(rr, cc) < kCornerLuminance) {
                visited[idx] = 1;
                q.push({rr, cc});
            }
        }
    }
    return out;
}

RgbImage inpaint_artifacts(const RgbImage& img, const ArtifactMask& mask) {
    if (mask.width != img.width || mask.height != img.height)
        throw DimensionMismatch("inpaint_artifacts: mask size mismatch");
    const int h = img.height, w = img.width;
    std::size_t n_masked = mask.count();
    if (n_masked == img.n_pixels()) throw DegenerateImage("inpaint_artifacts: mask covers image");
    if (n_masked == 0) return img;

    RgbImage cur = img;
    std::vector<std::uint8_t> valid(img.n_pixels());
    for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = mask.data[i] ? 0 : 1;

    // Synchronous rounds: fill pixels whose 3x3 neighborhood already has valid
    // values, then promote them. Terminates because every masked component
    // borders valid pixels.
    std::size_t remaining = n_masked;
    while (remaining > 0) {
        RgbImage next = cur;
        std::vector<std::size_t> promoted;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                std::size_t idx = static_cast<std::size_t>(r) * w + c;
                if (valid[idx]) continue;
                double acc[3] = {0, 0, 0};
                int cnt = 0;
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                        std::size_t nidx = static_cast<std::size_t>(rr) * w + cc;
                        if (!valid[nidx]) continue;
                        const float* p = cur.px(rr, cc);
                        acc[0] += p[0];
                        acc[1] += p[1];
                        acc[2] += p[2];
                        ++cnt;
                    }
                if (cnt > 0) {
                    float* dst = next.px(r, c);
                    for (int ch = 0; ch < 3; ++ch)
                        dst[ch] = static_cast<float>(acc[ch] / cnt);
                    promoted.push_back(idx);
                }
            }
        }
        for (std::size_t idx : promoted) valid[idx] = 1;
        remaining -= promoted.size();
        cur = std::move(next);
    }
    return cur;
}

RgbImage preprocess_image(const RgbImage& img, int target_w, int target_h, Exec exec) {
    RgbImage resized = resize(img, target_w, target_h, exec);
    ArtifactMask corners = mask_dark_corners(resized);
    ArtifactMask hairs = detect_hairs(resized, exec);
    Mask artifacts(resized.width, resized.height);
    for (std::size_t i = 0; i < artifacts.data.size(); ++i)
        artifacts.data[i] = (corners.data[i] || hairs.data[i]) ? 1 : 0;
    RgbImage cleaned = resized;
    if (artifacts.count() > 0 && artifacts.count() < resized.n_pixels())
        cleaned = inpaint_artifacts(resized, artifacts);
    return shades_of_gray(cleaned, exec);
}

} // namespace sled
