#include <benchmark/benchmark.h>

#include "dtplan/baselines.hpp"
#include "dtplan/generator.hpp"
#include "dtplan/planner.hpp"

namespace {

dtplan::Domain make_domain(int plans) {
    dtplan::GenParams params;
    params.seed = 29;
    params.plans_target = plans;
    return dtplan::generate_domain(params);
}

dtplan::Strategy strategy_for(int kind) {
    dtplan::Strategy s;
    s.kind = static_cast<dtplan::StrategyKind>(kind);
    return s;
}

void BM_drips(benchmark::State& state) {
    dtplan::Domain domain = make_domain(static_cast<int>(state.range(0)));
    dtplan::Strategy strategy = strategy_for(static_cast<int>(state.range(1)));
    std::size_t evaluated = 0;
    for (auto _ : state) {
        dtplan::PlanResult result = dtplan::drips_plan(domain, strategy);
        evaluated = result.stats.plans_evaluated;
        benchmark::DoNotOptimize(result);
    }
    state.counters["plans_evaluated"] = static_cast<double>(evaluated);
}
BENCHMARK(BM_drips)
    ->Args({100, 0})
    ->Args({100, 1})
    ->Args({100, 2})
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Args({1000, 2});

void BM_bb(benchmark::State& state) {
    dtplan::Domain domain = make_domain(static_cast<int>(state.range(0)));
    std::size_t peak = 0;
    for (auto _ : state) {
        dtplan::BBResult result = dtplan::bb_decision_tree(domain);
        peak = result.stats.peak_states;
        benchmark::DoNotOptimize(result);
    }
    state.counters["peak_states"] = static_cast<double>(peak);
}
BENCHMARK(BM_bb)->Arg(100)->Arg(1000);

void BM_enumerate_optimal(benchmark::State& state) {
    dtplan::Domain domain = make_domain(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto plans = dtplan::enumerate_optimal(domain);
        benchmark::DoNotOptimize(plans);
    }
}
BENCHMARK(BM_enumerate_optimal)->Arg(100)->Arg(1000);

}  // namespace
