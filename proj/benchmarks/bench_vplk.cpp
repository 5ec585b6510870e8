#include <cmath>
#include <numbers>
#include <string>

#include <benchmark/benchmark.h>

#include "vplk/collision.hpp"
#include "vplk/errors.hpp"
#include "vplk/integrator.hpp"
#include "vplk/landau_kernel.hpp"
#include "vplk/poisson.hpp"

using namespace vplk;

namespace {

DistField sample(int n_x, int n_v) {
    MaxwellianComponent c;
    c.amplitude = 0.2;
    c.temperature = 0.8;
    return sample_species(make_grid(1, n_x, n_v, 6.0), {c});
}

void BM_CoeffSlice(benchmark::State& state) {
    const auto F = sample(8, static_cast<int>(state.range(0)));
    CoeffBuilder builder(F.grid());
    SliceCoeff out(F.grid().nv_total());
    for (auto _ : state) {
        builder.build(F.slice(0), out);
        benchmark::DoNotOptimize(out.a[0].data());
    }
}
BENCHMARK(BM_CoeffSlice)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_QFull(benchmark::State& state) {
    const auto F = sample(8, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(q_full(F, F));
}
BENCHMARK(BM_QFull)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolvePb(benchmark::State& state) {
    const auto g = make_grid(1, static_cast<int>(state.range(0)), 8, 6.0);
    SpatialField n(g);
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = 1 + 0.5 * std::cos(2 * std::numbers::pi * g.x3(i)[0]);
    for (auto _ : state) benchmark::DoNotOptimize(solve_pb(n, 1.0));
}
BENCHMARK(BM_SolvePb)->Arg(32)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SolveCoupled(benchmark::State& state) {
    const auto g = make_grid(1, 64, 8, 6.0);
    SpatialField n(g);
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = 1 + 0.5 * std::cos(2 * std::numbers::pi * g.x3(i)[0]);
    for (auto _ : state) benchmark::DoNotOptimize(solve_coupled(n, 2.0));
}
BENCHMARK(BM_SolveCoupled)->Unit(benchmark::kMicrosecond);

void BM_StepTwoSpecies(benchmark::State& state) {
    const auto g = make_grid(1, 8, static_cast<int>(state.range(0)), 6.0);
    MaxwellianComponent c;
    c.amplitude = 0.1;
    InitialSpec spec;
    spec.plus = {c};
    spec.minus = {c};
    const auto s = make_initial(g, Variant::two_species, spec);
    StepConfig cfg;
    cfg.dt = 0.005;
    for (auto _ : state) benchmark::DoNotOptimize(step(s, cfg));
}
BENCHMARK(BM_StepTwoSpecies)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    vplk::set_warning_handler([](const std::string&) {});
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
}
