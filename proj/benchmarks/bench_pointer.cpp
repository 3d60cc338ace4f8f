#include <benchmark/benchmark.h>

#include <algorithm>

#include "pointersim/pointer.hpp"
#include "pointersim/transition.hpp"

using namespace pointersim;

namespace {

static void BM_DecoherenceFactor(benchmark::State& state) {
    const MeasurementConfig cfg{1.3, 0.9, 1.1, 0.8};
    for (auto _ : state) benchmark::DoNotOptimize(decoherence_factor(cfg, 1.0, -1.0));
}
BENCHMARK(BM_DecoherenceFactor);

static void BM_BranchCrossMoment(benchmark::State& state) {
    const MeasurementConfig cfg{1.3, 0.9, 1.1, 0.8};
    const GaussianBranch bi = evolve_branch(cfg, 1.0);
    const GaussianBranch bj = evolve_branch(cfg, -0.6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(branch_cross_moment(bi, bj, CrossMoment::overlap));
        benchmark::DoNotOptimize(branch_cross_moment(bi, bj, CrossMoment::x));
        benchmark::DoNotOptimize(branch_cross_moment(bi, bj, CrossMoment::p));
    }
}
BENCHMARK(BM_BranchCrossMoment);

static void BM_TransitionValue(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(dim);
    std::vector<cplx> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        a[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(dim - 1);
        amps[i] = {1.0 + static_cast<double>(i), 0.3};
    }
    const SpectralObservable obs(a);
    const SelectionState pre(amps);
    std::reverse(amps.begin(), amps.end());
    const SelectionState post(amps);
    const MeasurementConfig cfg{1.1, 1.0, 1.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(transition_value(obs, pre, post, cfg));
}
BENCHMARK(BM_TransitionValue)->Arg(2)->Arg(4)->Arg(8);

static void BM_PostselectedShifts(benchmark::State& state) {
    const SpectralObservable obs({1.0, -1.0});
    const SelectionState pre({cplx{0.8, 0.1}, cplx{0.5, -0.2}});
    const SelectionState post({cplx{0.6, 0.0}, cplx{0.7, 0.3}});
    const MeasurementConfig cfg{1.1, 1.0, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(postselected_pointer_shifts(obs, pre, post, cfg));
}
BENCHMARK(BM_PostselectedShifts);

} // namespace
