#include <benchmark/benchmark.h>

#include "dtplan/baselines.hpp"
#include "dtplan/generator.hpp"
#include "dtplan/projection.hpp"

namespace {

dtplan::Domain make_domain(int plans) {
    dtplan::GenParams params;
    params.seed = 11;
    params.plans_target = plans;
    return dtplan::generate_domain(params);
}

void BM_evaluate_root(benchmark::State& state) {
    dtplan::Domain domain = make_domain(static_cast<int>(state.range(0)));
    std::vector<dtplan::ActionId> root{domain.root()};
    for (auto _ : state) {
        dtplan::EUInterval eu = dtplan::evaluate_plan(root, domain);
        benchmark::DoNotOptimize(eu);
    }
}
BENCHMARK(BM_evaluate_root)->Arg(100)->Arg(1000)->Arg(6000);

void BM_evaluate_primitive_plans(benchmark::State& state) {
    dtplan::Domain domain = make_domain(static_cast<int>(state.range(0)));
    auto plans = dtplan::enumerate_plans(domain);
    for (auto _ : state) {
        double acc = 0.0;
        for (const auto& steps : plans) acc += dtplan::evaluate_plan(steps, domain).eu.lo;
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * plans.size()));
}
BENCHMARK(BM_evaluate_primitive_plans)->Arg(100)->Arg(500);

void BM_bound_weighted_sum(benchmark::State& state) {
    std::vector<std::pair<dtplan::Interval, dtplan::Interval>> items;
    for (int i = 0; i < 12; ++i)
        items.emplace_back(dtplan::Interval(i * 1.25, i * 1.25 + 3.0),
                           dtplan::Interval(0.0, 0.25));
    for (auto _ : state) {
        dtplan::Interval b = dtplan::bound_weighted_sum(items);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_bound_weighted_sum);

}  // namespace
