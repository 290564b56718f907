#include "sled/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "sled/errors.hpp"

namespace sled {
namespace {

float srgb_to_linear(float v) {
    return v <= 0.04045f ? v / 12.92f : std::pow((v + 0.055f) / 1.055f, 2.4f);
}

float lab_f(float t) {
    constexpr float kDelta3 = 216.0f / 24389.0f;
    constexpr float kFactor = 841.0f / 108.0f;
    return t > kDelta3 ? std::cbrt(t) : kFactor * t + 4.0f / 29.0f;
}

struct LabImage {
    int width = 0, height = 0;
    std::vector<float> l, a, b;  // planar
};

LabImage to_lab(const RgbImage& img, Exec exec) {
    LabImage lab;
    lab.width = img.width;
    lab.height = img.height;
    const std::size_t n = img.n_pixels();
    lab.l.resize(n);
    lab.a.resize(n);
    lab.b.resize(n);
    auto convert = [&](std::size_t i) {
        auto v = rgb_to_lab(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
        lab.l[i] = v[0];
        lab.a[i] = v[1];
        lab.b[i] = v[2];
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) convert(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) convert(i);
    }
    return lab;
}

struct Center {
    float row, col, l, a, b;
};

float gradient_at(const LabImage& lab, int r, int c) {
    const int h = lab.height, w = lab.width;
    auto idx = [&](int rr, int cc) {
        rr = std::clamp(rr, 0, h - 1);
        cc = std::clamp(cc, 0, w - 1);
        return static_cast<std::size_t>(rr) * w + cc;
    };
    std::size_t xr = idx(r, c + 1), xl = idx(r, c - 1);
    std::size_t yd = idx(r + 1, c), yu = idx(r - 1, c);
    float dx = (lab.l[xr] - lab.l[xl]) * (lab.l[xr] - lab.l[xl]) +
               (lab.a[xr] - lab.a[xl]) * (lab.a[xr] - lab.a[xl]) +
               (lab.b[xr] - lab.b[xl]) * (lab.b[xr] - lab.b[xl]);
    float dy = (lab.l[yd] - lab.l[yu]) * (lab.l[yd] - lab.l[yu]) +
               (lab.a[yd] - lab.a[yu]) * (lab.a[yd] - lab.a[yu]) +
               (lab.b[yd] - lab.b[yu]) * (lab.b[yd] - lab.b[yu]);
    return dx + dy;
}

std::vector<Center> init_centers(const LabImage& lab, int n_target, double step) {
    const int h = lab.height, w = lab.width;
    auto grid_options = [](int extent, double s) {
        int lo = std::max(1, static_cast<int>(std::floor(extent / s)));
        int hi = std::max(1, static_cast<int>(std::ceil(extent / s)));
        return std::array<int, 2>{lo, hi};
    };
    auto nx_opts = grid_options(w, step);
    auto ny_opts = grid_options(h, step);
    int best_nx = nx_opts[0], best_ny = ny_opts[0];
    long long best_diff = std::numeric_limits<long long>::max();
    for (int ny : {ny_opts[0], ny_opts[1]})
        for (int nx : {nx_opts[0], nx_opts[1]}) {
            long long diff = std::llabs(static_cast<long long>(nx) * ny - n_target);
            if (diff < best_diff) {
                best_diff = diff;
                best_nx = nx;
                best_ny = ny;
            }
        }

    // Perturb each seed to the lowest-gradient spot in its 3x3 window; the
    // window center is tried first so flat images keep the exact grid.
    static const int kOffsets[9][2] = {{0, 0},  {-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                       {0, 1},  {1, -1},  {1, 0},  {1, 1}};
    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(best_nx) * best_ny);
    for (int gy = 0; gy < best_ny; ++gy) {
        for (int gx = 0; gx < best_nx; ++gx) {
            int r = std::clamp(static_cast<int>((gy + 0.5) * h / best_ny), 0, h - 1);
            int c = std::clamp(static_cast<int>((gx + 0.5) * w / best_nx), 0, w - 1);
            int br = r, bc = c;
            float best_grad = std::numeric_limits<float>::max();
            for (auto& o : kOffsets) {
                int rr = r + o[0], cc = c + o[1];
                if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                float g = gradient_at(lab, rr, cc);
                if (g < best_grad) {
                    best_grad = g;
                    br = rr;
                    bc = cc;
                }
            }
            std::size_t idx = static_cast<std::size_t>(br) * w + bc;
            centers.push_back({static_cast<float>(br), static_cast<float>(bc), lab.l[idx],
                               lab.a[idx], lab.b[idx]});
        }
    }
    return centers;
}

// Centers bucketed on a coarse grid of cell size `step`; a pixel's candidates
// live in its 3x3 cell neighborhood.
struct CenterBuckets {
    int cells_x = 0, cells_y = 0;
    double step = 1.0;
    std::vector<std::vector<int>> cells;

    void build(const std::vector<Center>& centers, int w, int h, double s) {
        step = s;
        cells_x = std::max(1, static_cast<int>(std::ceil(w / s)));
        cells_y = std::max(1, static_cast<int>(std::ceil(h / s)));
        cells.assign(static_cast<std::size_t>(cells_x) * cells_y, {});
        for (int i = 0; i < static_cast<int>(centers.size()); ++i) {
            int cy = std::clamp(static_cast<int>(centers[i].row / s), 0, cells_y - 1);
            int cx = std::clamp(static_cast<int>(centers[i].col / s), 0, cells_x - 1);
            cells[static_cast<std::size_t>(cy) * cells_x + cx].push_back(i);
        }
    }
};

void assign_row(const LabImage& lab, const std::vector<Center>& centers,
                const CenterBuckets& buckets, float window, float spatial_scale,
                std::vector<int>& labels, int r) {
    const int w = lab.width;
    const int cy = std::clamp(static_cast<int>(r / buckets.step), 0, buckets.cells_y - 1);
    for (int c = 0; c < w; ++c) {
        const int cx = std::clamp(static_cast<int>(c / buckets.step), 0, buckets.cells_x - 1);
        std::size_t pidx = static_cast<std::size_t>(r) * w + c;
        const float pl = lab.l[pidx], pa = lab.a[pidx], pb = lab.b[pidx];
        float best_d = std::numeric_limits<float>::max();
        int best = -1;
        // Candidate ids ascend within a cell and cells are scanned in a fixed
        // order, but id order across cells is not monotone; ties are resolved
        // by lowest center id explicitly.
        for (int dy = -1; dy <= 1; ++dy) {
            int yy = cy + dy;
            if (yy < 0 || yy >= buckets.cells_y) continue;
            for (int dx = -1; dx <= 1; ++dx) {
                int xx = cx + dx;
                if (xx < 0 || xx >= buckets.cells_x) continue;
                for (int cid : buckets.cells[static_cast<std::size_t>(yy) * buckets.cells_x + xx]) {
                    const Center& ct = centers[cid];
                    float dr = r - ct.row, dc = c - ct.col;
                    if (std::fabs(dr) > window || std::fabs(dc) > window) continue;
                    float dl = pl - ct.l, da = pa - ct.a, db = pb - ct.b;
                    float d = dl * dl + da * da + db * db +
                              (dr * dr + dc * dc) * spatial_scale;
                    if (d < best_d || (d == best_d && cid < best)) {
                        best_d = d;
                        best = cid;
                    }
                }
            }
        }
        if (best < 0) {
            // No bucketed center within the window (can happen after centers
            // drift); fall back to a full scan.
            for (int cid = 0; cid < static_cast<int>(centers.size()); ++cid) {
                const Center& ct = centers[cid];
                float dr = r - ct.row, dc = c - ct.col;
                float dl = pl - ct.l, da = pa - ct.a, db = pb - ct.b;
                float d = dl * dl + da * da + db * db + (dr * dr + dc * dc) * spatial_scale;
                if (d < best_d) {
                    best_d = d;
                    best = cid;
                }
            }
        }
        labels[pidx] = best;
    }
}

// Relabels orphan components (every component of a label except its largest)
// smaller than min_orphan_size into the largest adjacent superpixel; bigger
// orphans become superpixels of their own. Returns the new label count.
int enforce_connectivity(std::vector<int>& labels, int w, int h, int n_labels,
                         int min_orphan_size) {
    const std::size_t n = labels.size();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::size_t>> comp_pixels;
    std::vector<int> comp_label;

    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        int cid = static_cast<int>(comp_pixels.size());
        int lbl = labels[start];
        comp_pixels.push_back({});
        comp_label.push_back(lbl);
        stack.push_back(start);
        comp[start] = cid;
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            comp_pixels[cid].push_back(p);
            int r = static_cast<int>(p / w), c = static_cast<int>(p % w);
            const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
            for (auto& nbp : nb) {
                if (nbp[0] < 0 || nbp[0] >= h || nbp[1] < 0 || nbp[1] >= w) continue;
                std::size_t q = static_cast<std::size_t>(nbp[0]) * w + nbp[1];
                if (comp[q] < 0 && labels[q] == lbl) {
                    comp[q] = cid;
                    stack.push_back(q);
                }
            }
        }
    }

    // Largest component of each label keeps it (first found wins ties).
    std::vector<int> keeper(n_labels, -1);
    for (int cid = 0; cid < static_cast<int>(comp_pixels.size()); ++cid) {
        int lbl = comp_label[cid];
        if (keeper[lbl] < 0 || comp_pixels[cid].size() > comp_pixels[keeper[lbl]].size())
            keeper[lbl] = cid;
    }

    std::vector<long long> label_size(n_labels, 0);
    for (std::size_t i = 0; i < n; ++i) ++label_size[labels[i]];

    std::vector<std::uint8_t> pending(comp_pixels.size(), 0);
    std::vector<int> orphans;
    for (int cid = 0; cid < static_cast<int>(comp_pixels.size()); ++cid) {
        if (keeper[comp_label[cid]] != cid) {
            pending[cid] = 1;
            orphans.push_back(cid);
            label_size[comp_label[cid]] -= static_cast<long long>(comp_pixels[cid].size());
        }
    }

    int next_label = n_labels;
    std::deque<int> queue(orphans.begin(), orphans.end());
    std::size_t since_progress = 0;
    while (!queue.empty()) {
        int cid = queue.front();
        queue.pop_front();
        if (static_cast<int>(comp_pixels[cid].size()) >= min_orphan_size) {
            int lbl = next_label++;
            label_size.push_back(static_cast<long long>(comp_pixels[cid].size()));
            for (std::size_t p : comp_pixels[cid]) labels[p] = lbl;
            pending[cid] = 0;
            since_progress = 0;
            continue;
        }
        int best_lbl = -1;
        long long best_size = -1;
        bool has_settled_neighbor = false;
        for (std::size_t p : comp_pixels[cid]) {
            int r = static_cast<int>(p / w), c = static_cast<int>(p % w);
            const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
            for (auto& nbp : nb) {
                if (nbp[0] < 0 || nbp[0] >= h || nbp[1] < 0 || nbp[1] >= w) continue;
                std::size_t q = static_cast<std::size_t>(nbp[0]) * w + nbp[1];
                if (comp[q] == cid || pending[comp[q]]) continue;
                has_settled_neighbor = true;
                int lbl = labels[q];
                long long sz = label_size[lbl];
                if (sz > best_size || (sz == best_size && lbl < best_lbl)) {
                    best_size = sz;
                    best_lbl = lbl;
                }
            }
        }
        if (!has_settled_neighbor) {
            // Surrounded by other orphans; retry after they settle.
            queue.push_back(cid);
            if (++since_progress > queue.size()) {
                // No orphan in the queue can settle (fully orphan-enclosed
                // cluster); absorb into the largest pending neighbor's label.
                for (std::size_t p : comp_pixels[cid]) {
                    int r = static_cast<int>(p / w), c = static_cast<int>(p % w);
                    const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
                    for (auto& nbp : nb) {
                        if (nbp[0] < 0 || nbp[0] >= h || nbp[1] < 0 || nbp[1] >= w) continue;
                        std::size_t q = static_cast<std::size_t>(nbp[0]) * w + nbp[1];
                        if (comp[q] != cid) {
                            best_lbl = labels[q];
                            break;
                        }
                    }
                    if (best_lbl >= 0) break;
                }
                queue.pop_back();
                label_size[best_lbl] += static_cast<long long>(comp_pixels[cid].size());
                for (std::size_t p : comp_pixels[cid]) labels[p] = best_lbl;
                pending[cid] = 0;
                since_progress = 0;
            }
            continue;
        }
        since_progress = 0;
        label_size[best_lbl] += static_cast<long long>(comp_pixels[cid].size());
        for (std::size_t p : comp_pixels[cid]) labels[p] = best_lbl;
        pending[cid] = 0;
    }

    // Compact to [0,L), ascending old ids.
    std::vector<int> remap(next_label, -1);
    int compact = 0;
    for (int lbl = 0; lbl < next_label; ++lbl)
        if (label_size[lbl] > 0) remap[lbl] = compact++;
    for (std::size_t i = 0; i < n; ++i) labels[i] = remap[labels[i]];
    return compact;
}

} // namespace

std::array<float, 3> rgb_to_lab(float r, float g, float b) {
    float rl = srgb_to_linear(r), gl = srgb_to_linear(g), bl = srgb_to_linear(b);
    // sRGB D65 primaries, normalized by the white point.
    float x = (0.4124564f * rl + 0.3575761f * gl + 0.1804375f * bl) / 0.95047f;
    float y = 0.2126729f * rl + 0.7151522f * gl + 0.0721750f * bl;
    float z = (0.0193339f * rl + 0.1191920f * gl + 0.9503041f * bl) / 1.08883f;
    float fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
    return {116.0f * fy - 16.0f, 500.0f * (fx - fy), 200.0f * (fy - fz)};
}

SuperpixelLabeling slic_segment(const RgbImage& img, int n_target, const SlicParams& params) {
    const int h = img.height, w = img.width;
    const long long n_px = static_cast<long long>(h) * w;
    if (n_target < 2 || n_target > n_px)
        throw DegenerateImage("slic_segment: n_target out of range");

    LabImage lab = to_lab(img, params.exec);
    const double step = std::sqrt(static_cast<double>(n_px) / n_target);
    std::vector<Center> centers = init_centers(lab, n_target, step);
    const float window = static_cast<float>(step);
    const float spatial_scale =
        static_cast<float>(params.compactness * params.compactness / (step * step));

    std::vector<int> labels(static_cast<std::size_t>(n_px), -1);
    CenterBuckets buckets;
    for (int iter = 0; iter < params.iterations; ++iter) {
        buckets.build(centers, w, h, step);
        if (params.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (int r = 0; r < h; ++r)
                assign_row(lab, centers, buckets, window, spatial_scale, labels, r);
        } else {
            for (int r = 0; r < h; ++r)
                assign_row(lab, centers, buckets, window, spatial_scale, labels, r);
        }

        // Update step stays serial: one pass in pixel order keeps the centers
        // identical across execution policies.
        std::vector<std::array<double, 5>> acc(centers.size(), {0, 0, 0, 0, 0});
        std::vector<long long> cnt(centers.size(), 0);
        std::size_t i = 0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c, ++i) {
                int lbl = labels[i];
                auto& a = acc[lbl];
                a[0] += r;
                a[1] += c;
                a[2] += lab.l[i];
                a[3] += lab.a[i];
                a[4] += lab.b[i];
                ++cnt[lbl];
            }
        }
        for (std::size_t ci = 0; ci < centers.size(); ++ci) {
            if (cnt[ci] == 0) continue;  // empty centers keep their position
            double inv = 1.0 / cnt[ci];
            centers[ci].row = static_cast<float>(acc[ci][0] * inv);
            centers[ci].col = static_cast<float>(acc[ci][1] * inv);
            centers[ci].l = static_cast<float>(acc[ci][2] * inv);
            centers[ci].a = static_cast<float>(acc[ci][3] * inv);
            centers[ci].b = static_cast<float>(acc[ci][4] * inv);
        }
    }

    // Drop empty labels before the connectivity pass.
    {
        std::vector<long long> cnt(centers.size(), 0);
        for (int lbl : labels) ++cnt[lbl];
        std::vector<int> remap(centers.size(), -1);
        int compact = 0;
        for (std::size_t ci = 0; ci < centers.size(); ++ci)
            if (cnt[ci] > 0) remap[ci] = compact++;
        for (auto& lbl : labels) lbl = remap[lbl];
        const int min_orphan = std::max(1, static_cast<int>(step * step / 4.0));
        enforce_connectivity(labels, w, h, compact, min_orphan);
    }

    return superpixel_stats(img, labels);
}

SuperpixelLabeling superpixel_stats(const RgbImage& img, const std::vector<int>& labels) {
    if (labels.size() != img.n_pixels())
        throw DimensionMismatch("superpixel_stats: label grid size mismatch");
    int n_labels = 0;
    for (int lbl : labels) n_labels = std::max(n_labels, lbl + 1);

    SuperpixelLabeling sp;
    sp.width = img.width;
    sp.height = img.height;
    sp.n_superpixels = n_labels;
    sp.labels = labels;
    sp.means.assign(n_labels, {0.0, 0.0, 0.0});
    sp.centroids.assign(n_labels, {0.0, 0.0});
    sp.sizes.assign(n_labels, 0);

    std::size_t i = 0;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c, ++i) {
            int lbl = labels[i];
            const float* p = img.data.data() + 3 * i;
            sp.means[lbl][0] += p[0];
            sp.means[lbl][1] += p[1];
            sp.means[lbl][2] += p[2];
            sp.centroids[lbl][0] += r;
            sp.centroids[lbl][1] += c;
            ++sp.sizes[lbl];
        }
    }
    for (int lbl = 0; lbl < n_labels; ++lbl) {
        if (sp.sizes[lbl] == 0)
            throw EmptySuperpixel("superpixel_stats: label " + std::to_string(lbl) + " empty");
        double inv = 1.0 / sp.sizes[lbl];
        for (auto& v : sp.means[lbl]) v *= inv;
        for (auto& v : sp.centroids[lbl]) v *= inv;
    }
    return sp;
}

} // namespace sled
