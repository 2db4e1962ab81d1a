#include <benchmark/benchmark.h>

#include "hspde/characteristics.hpp"
#include "hspde/evolve.hpp"
#include "hspde/microlocal.hpp"
#include "hspde/presets.hpp"

using namespace hspde;

namespace {

Field test_field(std::shared_ptr<const Grid1D> g) {
    return presets::gaussian_bump(g, 0.5 * g->length, 0.8);
}

void BM_dft_roundtrip(benchmark::State& state) {
    auto g = Grid1D::make(static_cast<int>(state.range(0)));
    const Field u = test_field(g);
    for (auto _ : state) {
        Field back = idft(dft(u));
        benchmark::DoNotOptimize(back);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_dft_roundtrip)->Arg(128)->Arg(256)->Arg(512);

void BM_apply_pdo_symmetrized(benchmark::State& state) {
    auto g = Grid1D::make(static_cast<int>(state.range(0)));
    const SeparableSymbol a =
        make_symmetrized_transport(g, presets::affine_sine(*g, 1.0, 0.5));
    const Field u = test_field(g);
    for (auto _ : state) {
        Field v = apply_pdo(a, u);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_apply_pdo_symmetrized)->Arg(128)->Arg(256)->Arg(512);

void BM_sobolev_norm(benchmark::State& state) {
    auto g = Grid1D::make(static_cast<int>(state.range(0)));
    const Field u = test_field(g);
    for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(u, 2.0));
}
BENCHMARK(BM_sobolev_norm)->Arg(256);

void BM_heun_solve(benchmark::State& state) {
    auto g = Grid1D::make(256);
    SpdeProblem p;
    p.a = TimeSymbolFamily::constant(
        make_symmetrized_transport(g, presets::affine_sine(*g, 1.0, 0.3)));
    p.u0 = test_field(g);
    p.sobolev_index = 2.0;
    EvolveConfig cfg;
    cfg.steps = static_cast<int>(state.range(0));
    cfg.record_every = cfg.steps;
    cfg.energy_log = false;
    const BrownianPath path = sample_brownian(cfg.steps, 1.0, 7, 0);
    for (auto _ : state) {
        Trajectory traj = integrate_spde(p, path, cfg);
        benchmark::DoNotOptimize(traj);
    }
    state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_heun_solve)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_char_flow(benchmark::State& state) {
    auto g = Grid1D::make(256);
    const auto alpha = presets::affine_sine(*g, 1.0, 0.4);
    const BrownianPath path = sample_brownian(1024, 1.0, 9, 0);
    for (auto _ : state) {
        CharFlow flow = flow_solve(g, alpha, CoefficientField{}, path, 1024, 1024);
        benchmark::DoNotOptimize(flow);
    }
    state.SetItemsProcessed(state.iterations() * 1024 * g->n);
}
BENCHMARK(BM_char_flow)->Unit(benchmark::kMillisecond);

void BM_detect_singularities(benchmark::State& state) {
    auto g = Grid1D::make(256);
    const Field kink = presets::triangle_kink(g, 2.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(detect_singularities(kink, 8.0 * g->dx));
    state.SetItemsProcessed(state.iterations() * g->n);
}
BENCHMARK(BM_detect_singularities)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
