#include <benchmark/benchmark.h>

#include <numeric>

#include "patsched/sweep.hpp"

namespace {

patsched::SweepPlan standard_plan(std::size_t seeds) {
    patsched::SweepPlan plan;
    plan.policies.assign(patsched::kAllPolicies.begin(), patsched::kAllPolicies.end());
    plan.seeds.resize(seeds);
    std::iota(plan.seeds.begin(), plan.seeds.end(), 1);
    plan.engine.check_invariants = false;
    plan.engine.record_events = false;
    plan.scenario_for_seed = [](std::uint64_t seed) {
        return patsched::generate_scenario(patsched::GeneratorParams{}, seed);
    };
    return plan;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto plan = standard_plan(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(patsched::run_sweep_serial(plan));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plan.jobs().size()));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto plan = standard_plan(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(patsched::run_sweep(plan));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plan.jobs().size()));
}

void BM_SingleRunChecked(benchmark::State& state) {
    const auto spec = patsched::generate_scenario(patsched::GeneratorParams{}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(patsched::run(spec, patsched::PolicyLabel::DOPSG));
    }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SingleRunChecked)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
