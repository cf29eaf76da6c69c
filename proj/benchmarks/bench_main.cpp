#include <benchmark/benchmark.h>

#include <numbers>

#include "dehncan/farey.hpp"
#include "dehncan/lobachevsky.hpp"
#include "dehncan/spun.hpp"
#include "dehncan/volume.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

void BM_Lobachevsky(benchmark::State& state) {
    double x = 0.1, acc = 0;
    for (auto _ : state) {
        acc += dehncan::lobachevsky(x);
        x += 1e-4;
        if (x > 3.0) x = 0.1;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Lobachevsky);

void BM_FareyPath(benchmark::State& state) {
    auto m = dehncan::make_slope(987, 610);  // long continued fraction
    for (auto _ : state) {
        auto path = dehncan::farey_path(dehncan::make_slope(0, 1),
                                        dehncan::Slope{1, 0},
                                        dehncan::make_slope(-1, 1), m);
        benchmark::DoNotOptimize(path.N());
    }
}
BENCHMARK(BM_FareyPath);

void BM_TorusMaximize(benchmark::State& state) {
    auto path = dehncan::farey_path(dehncan::make_slope(0, 1), dehncan::Slope{1, 0},
                                    dehncan::make_slope(-1, 1),
                                    dehncan::make_slope(state.range(0), 1));
    dehncan::BoundaryAngles b{0.3, 0.4, kPi - 0.7};
    if (path.pq_swapped) std::swap(b.p, b.q);
    for (auto _ : state) {
        auto res = dehncan::maximize(path, b);
        benchmark::DoNotOptimize(res.value);
    }
}
BENCHMARK(BM_TorusMaximize)->Arg(4)->Arg(12)->Arg(25);

void BM_SpunTorus(benchmark::State& state) {
    for (auto _ : state) {
        auto r = dehncan::spun_torus_solve(0.3, kPi - 0.7, 0.4, 1, 4);
        benchmark::DoNotOptimize(r.volume);
    }
}
BENCHMARK(BM_SpunTorus);

}  // namespace

BENCHMARK_MAIN();
