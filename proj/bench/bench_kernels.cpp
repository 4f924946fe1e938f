// Serial reference kernels against their OpenMP versions.
// Arg layout: {grid nodes per axis, threads}. The ref variants ignore the thread count.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "lpsum/convolve.hpp"
#include "lpsum/legendre.hpp"
#include "lpsum/verify.hpp"

using namespace lps;

namespace {

GridFn base2(int n) {
    std::mt19937_64 rng(7);
    return random_convex_base(rng, Box::cube(2, -4, 4, n), 0.5, 2);
}

GridFn density2(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_s_concave(rng, Box::cube(2, -6, 6, n), 0, 1, 3).density();
}

void BM_transform_ref(benchmark::State& st) {
    GridFn u = base2(st.range(0));
    Box d = dual_box(u);
    for (auto _ : st) benchmark::DoNotOptimize(ref::legendre_transform(u, d));
}

void BM_transform_omp(benchmark::State& st) {
    GridFn u = base2(st.range(0));
    Box d = dual_box(u);
    set_threads(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(legendre_transform(u, d));
    set_threads(1);
}

void BM_transform_brute(benchmark::State& st) {
    GridFn u = base2(st.range(0));
    Box d = dual_box(u);
    for (auto _ : st) benchmark::DoNotOptimize(ref::legendre_brute(u, d));
}

void BM_supconv_ref(benchmark::State& st) {
    GridFn f = density2(st.range(0), 1), g = density2(st.range(0), 2);
    for (auto _ : st) benchmark::DoNotOptimize(ref::sup_convolution_s(f, g, 0.5, 0.6, 0.4, f.box()));
}

void BM_supconv_omp(benchmark::State& st) {
    GridFn f = density2(st.range(0), 1), g = density2(st.range(0), 2);
    set_threads(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(sup_convolution_s(f, g, 0.5, 0.6, 0.4, f.box()));
    set_threads(1);
}

void threads_args(benchmark::internal::Benchmark* b) {
    int hw = omp_get_num_procs();
    for (int n : {65, 129, 257})
        for (int t = 1; t <= hw; t *= 2) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_transform_ref)->Args({65, 1})->Args({129, 1})->Args({257, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_transform_omp)->Apply(threads_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_transform_brute)->Args({33, 1})->Args({65, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_supconv_ref)->Args({65, 1})->Args({129, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_supconv_omp)->Args({65, 1})->Args({129, 1})->Args({129, 2})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
