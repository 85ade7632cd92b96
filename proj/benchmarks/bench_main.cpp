#include "fdshock/diagnostics.hpp"
#include "fdshock/profile.hpp"
#include "fdshock/solver.hpp"

#include <benchmark/benchmark.h>

using namespace fdshock;

namespace {

const FluxSpec kCase2Flux({-1.0, 2.0, -2.0, 1.0});

const ProfileTable& case2_profile() {
    static const ProfileTable t = build_profile(analyze_shock(kCase2Flux, 2.0), kCase2Flux);
    return t;
}

}  // namespace

static void BM_BuildProfile(benchmark::State& state) {
    const ShockData shock = analyze_shock(kCase2Flux, 2.0);
    ProfileOptions o;
    o.n_nodes = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_profile(shock, kCase2Flux, o));
    }
}
BENCHMARK(BM_BuildProfile)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

static void BM_EvalProfile(benchmark::State& state) {
    const ProfileTable& p = case2_profile();
    double z = -10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.eval(z));
        z = z > 50.0 ? -10.0 : z + 0.013;
    }
}
BENCHMARK(BM_EvalProfile);

static void BM_Step(benchmark::State& state) {
    SimConfig c;
    c.z_left = -30.0;
    c.z_right = 20.0;
    c.n_cells = static_cast<int>(state.range(0));
    c.scheme = state.range(1) == 0 ? Scheme::ImexLagged : Scheme::ExplicitRk2;
    InitialData d;
    d.amplitude = 0.01;
    const SimState s = initial_state(c, case2_profile(), d);
    const double dt = stable_dt(s, c, case2_profile());
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(s, c, case2_profile(), dt));
    }
    state.SetItemsProcessed(state.iterations() * c.n_cells);
}
BENCHMARK(BM_Step)->Args({800, 0})->Args({1600, 0})->Args({800, 1});

static void BM_Diagnostics(benchmark::State& state) {
    SimConfig c;
    c.z_left = -30.0;
    c.z_right = 20.0;
    c.n_cells = static_cast<int>(state.range(0));
    InitialData d;
    d.amplitude = 0.01;
    const SimState s = initial_state(c, case2_profile(), d);
    for (auto _ : state) {
        const PerturbationField f = antiderivative(s.z, s.u, case2_profile(), 0.0, 0.0);
        benchmark::DoNotOptimize(weighted_norms(f, case2_profile()));
        benchmark::DoNotOptimize(nonlinear_remainders(f, kCase2Flux));
    }
}
BENCHMARK(BM_Diagnostics)->Arg(800);
BENCHMARK_MAIN();
