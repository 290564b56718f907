// Serial reference vs OpenMP kernel timings on a 768x560 synthetic image.
// Run: ./sled_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "sled/graph.hpp"
#include "sled/isolation_forest.hpp"
#include "sled/multiscale.hpp"
#include "sled/preprocess.hpp"
#include "sled/superpixel.hpp"
#include "sled/synthdata.hpp"

using namespace sled;

namespace {

const RgbImage& bench_image() {
    static RgbImage img = generate(random_spec(768, 560, 7, 3, 0.02, 0.15, 3)).first;
    return img;
}

const SuperpixelLabeling& bench_superpixels() {
    static SuperpixelLabeling sp = slic_segment(bench_image(), 400);
    return sp;
}

Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void bm_resize(benchmark::State& state) {
    const RgbImage& img = bench_image();
    for (auto _ : state) {
        RgbImage out = resize(img, 384, 280, exec_of(state));
        benchmark::DoNotOptimize(out.data.data());
    }
}

void bm_shades_of_gray(benchmark::State& state) {
    const RgbImage& img = bench_image();
    for (auto _ : state) {
        RgbImage out = shades_of_gray(img, exec_of(state));
        benchmark::DoNotOptimize(out.data.data());
    }
}

void bm_hair_detection(benchmark::State& state) {
    const RgbImage& img = bench_image();
    for (auto _ : state) {
        Mask m = detect_hairs(img, exec_of(state));
        benchmark::DoNotOptimize(m.data.data());
    }
}

void bm_slic(benchmark::State& state) {
    const RgbImage& img = bench_image();
    SlicParams params;
    params.exec = exec_of(state);
    for (auto _ : state) {
        SuperpixelLabeling sp = slic_segment(img, 400, params);
        benchmark::DoNotOptimize(sp.labels.data());
    }
}

void bm_graph_build(benchmark::State& state) {
    const SuperpixelLabeling& sp = bench_superpixels();
    GraphParams params;
    params.exec = exec_of(state);
    for (auto _ : state) {
        SuperpixelGraph g = build_graph_reconnected(sp, params);
        benchmark::DoNotOptimize(g.edges.data());
    }
}

void bm_score_map(benchmark::State& state) {
    const SuperpixelLabeling& sp = bench_superpixels();
    static IsolationForest forest = fit_forest(
        std::vector<std::array<double, 3>>(sp.means.begin(),
                                           sp.means.begin() + sp.n_superpixels / 2),
        100, 3);
    for (auto _ : state) {
        ScoreMap map = score_map(forest, sp, exec_of(state));
        benchmark::DoNotOptimize(map.data.data());
    }
}

void bm_integrate(benchmark::State& state) {
    static std::vector<ScaleResult> scales = [] {
        std::mt19937_64 rng(5);
        std::vector<ScaleResult> out;
        for (int s = 0; s < 11; ++s) {
            ScoreMap map(768, 560);
            for (auto& v : map.data) v = static_cast<float>((rng() % 1000) / 999.0);
            out.push_back({200 + 50 * s, std::move(map), 0.02 + 0.01 * s, false});
        }
        return out;
    }();
    for (auto _ : state) {
        ScoreMap fused = integrate(scales, exec_of(state));
        benchmark::DoNotOptimize(fused.data.data());
    }
}

} // namespace

BENCHMARK(bm_resize)->Arg(0)->Arg(1)->ArgNames({"omp"});
BENCHMARK(bm_shades_of_gray)->Arg(0)->Arg(1)->ArgNames({"omp"});
BENCHMARK(bm_hair_detection)->Arg(0)->Arg(1)->ArgNames({"omp"})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_slic)->Arg(0)->Arg(1)->ArgNames({"omp"})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_graph_build)->Arg(0)->Arg(1)->ArgNames({"omp"})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_score_map)->Arg(0)->Arg(1)->ArgNames({"omp"});
BENCHMARK(bm_integrate)->Arg(0)->Arg(1)->ArgNames({"omp"});

BENCHMARK_MAIN();
