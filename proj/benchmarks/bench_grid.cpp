#include <benchmark/benchmark.h>

#include <cmath>

#include "pointersim/fft.hpp"
#include "pointersim/grid.hpp"

using namespace pointersim;

namespace {

static void BM_Fft(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const detail::Fft fft(n);
    std::vector<cplx> data(n);
    for (std::size_t i = 0; i < n; ++i)
        data[i] = {std::sin(0.01 * static_cast<double>(i)), 0.0};
    for (auto _ : state) {
        fft.forward(data);
        fft.inverse(data);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(BM_Fft)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_Propagate(benchmark::State& state) {
    const MeasurementConfig cfg{1.0, 1.0, 1.0, 1.0};
    const double pair[2] = {1.0, -1.0};
    GridSpec spec = GridSpec::auto_sized(cfg, pair);
    spec.n_steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(propagate(spec, cfg, 1.0).psi.data());
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(spec.n_steps));
}
BENCHMARK(BM_Propagate)->Arg(256)->Arg(1024);

static void BM_NumericOverlap(benchmark::State& state) {
    const MeasurementConfig cfg{1.0, 1.0, 1.0, 1.0};
    const double pair[2] = {1.0, -1.0};
    GridSpec spec = GridSpec::auto_sized(cfg, pair);
    spec.n_steps = 512;
    const GridBranch a = propagate(spec, cfg, 1.0);
    const GridBranch b = propagate(spec, cfg, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(numeric_overlap(a, b));
}
BENCHMARK(BM_NumericOverlap);

} // namespace
