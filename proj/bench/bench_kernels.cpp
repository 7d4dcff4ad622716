#include <benchmark/benchmark.h>

#include <cmath>

#include "finsler/geometry.hpp"
#include "finsler/invariance.hpp"
#include "finsler/parallel.hpp"

using namespace finsler;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "omp" : "serial");
}

void BM_MapIndices(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        auto v = kernels::map_indices<double>(exec_of(state), n, [](std::size_t i) {
            double acc = 0;
            for (int k = 1; k < 64; ++k) acc += std::sin(static_cast<double>(i * k));
            return acc;
        });
        benchmark::DoNotOptimize(v.data());
    }
    label(state);
}

void BM_InvarianceSuite(benchmark::State& state) {
    const auto spec = MetricSpec::fubini_study(4, Field::Complex);
    for (auto _ : state)
        benchmark::DoNotOptimize(isometry_invariance_suite(spec, 100, 7, 1e-9, 2, exec_of(state)).max_deviation);
    label(state);
}

void BM_CurveLength(benchmark::State& state) {
    const auto spec = MetricSpec::fubini_study(3, Field::Real);
    const auto curve = Curve::parametric(
        [](double t) { return Vector::real({std::cos(t), std::sin(t), 0.3 * t}); }, 0, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(curve_length(spec, curve, 20001, exec_of(state)));
    label(state);
}

void BM_Geodesic(benchmark::State& state) {
    const auto spec = MetricSpec::fubini_study(3, Field::Real);
    GeodesicOptions opts;
    opts.n_iterations = 10;
    opts.exec = exec_of(state);
    const auto g = Vector::real({1, 0, 0});
    const auto h = Vector::real({0, 1, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(geodesic_distance(spec, g, h, opts).value);
    label(state);
}

}  // namespace

BENCHMARK(BM_MapIndices)->ArgsProduct({{0, 1}, {1 << 12, 1 << 16}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_InvarianceSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveLength)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Geodesic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
