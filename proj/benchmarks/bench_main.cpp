#include "nsfem/assembly.hpp"
#include "nsfem/initial_data.hpp"
#include "nsfem/stepper.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nsfem;

std::shared_ptr<const Discretization> disc_for(int n) {
    static std::map<int, std::shared_ptr<const Discretization>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto mesh = std::make_shared<Mesh>(build_rect_mesh(-M_PI, M_PI, -M_PI, M_PI, n, n));
        it = cache.emplace(n, std::make_shared<Discretization>(mesh)).first;
    }
    return it->second;
}

void BM_AssembleMass(benchmark::State& state) {
    auto disc = disc_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(*disc->velocity));
    state.SetItemsProcessed(state.iterations() * disc->mesh->n_cells());
}
BENCHMARK(BM_AssembleMass)->Arg(16)->Arg(32);

void BM_AssembleConvection(benchmark::State& state) {
    auto disc = disc_for(static_cast<int>(state.range(0)));
    NSStepper stepper(disc, {});
    const SolverState s = stepper.initial_state(initial_shear());
    const Field w = disc->projections->rt_project(s.u_curr);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_convection(w, *disc->velocity));
    state.SetItemsProcessed(state.iterations() * disc->mesh->n_cells());
}
BENCHMARK(BM_AssembleConvection)->Arg(16)->Arg(32);

void BM_RTProjection(benchmark::State& state) {
    auto disc = disc_for(static_cast<int>(state.range(0)));
    NSStepper stepper(disc, {});
    const SolverState s = stepper.initial_state(initial_shear());
    for (auto _ : state) benchmark::DoNotOptimize(disc->projections->rt_project(s.u_curr));
}
BENCHMARK(BM_RTProjection)->Arg(16)->Arg(32);

void BM_Step(benchmark::State& state) {
    auto disc = disc_for(static_cast<int>(state.range(0)));
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(disc, opt);
    const TimeGrid grid = build_graded_grid(1.0, 1.0 / 64.0, 0.0);
    SolverState s = stepper.initial_state(initial_shear());
    for (auto _ : state) {
        if (s.n >= grid.n_steps()) {
            state.PauseTiming();
            s = stepper.initial_state(initial_shear());
            state.ResumeTiming();
        }
        stepper.step(s, grid);
    }
}
BENCHMARK(BM_Step)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
