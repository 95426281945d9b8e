#include <benchmark/benchmark.h>

#include "ttess/enumerate.hpp"
#include "ttess/models.hpp"
#include "ttess/operators.hpp"
#include "ttess/sampler.hpp"

using namespace ttess;

namespace {

TTessellation equilibrium_state(double tau) {
    Chain chain(TTessellation::empty(unit_square()), std::make_shared<CrttModel>(tau), {}, 1);
    chain.run(20000);
    return chain.tessellation();
}

void BM_SplitRevert(benchmark::State& state) {
    auto t = equilibrium_state(static_cast<double>(state.range(0)) / 10.0);
    Rng rng(2);
    for (auto _ : state) {
        const Split s = sample_uniform_split(t, rng);
        const Stats before = t.stats();
        const auto rc = apply_update(t, s);
        revert(t, rc, before);
    }
    state.counters["segments"] = static_cast<double>(t.stats().nseint);
}
BENCHMARK(BM_SplitRevert)->Arg(19)->Arg(100);

void BM_MergeRevert(benchmark::State& state) {
    auto t = equilibrium_state(1.9);
    const auto merges = enumerate_merges(t);
    std::size_t i = 0;
    for (auto _ : state) {
        const Stats before = t.stats();
        const auto rc = apply_update(t, merges[i++ % merges.size()]);
        revert(t, rc, before);
    }
}
BENCHMARK(BM_MergeRevert);

void BM_FlipRevert(benchmark::State& state) {
    auto t = equilibrium_state(1.9);
    std::vector<Flip> flips;
    for (const auto& f : enumerate_flips(t)) {
        if (plan_flip(t, f)) flips.push_back(f);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const Stats before = t.stats();
        const auto rc = apply_update(t, flips[i++ % flips.size()]);
        revert(t, rc, before);
    }
}
BENCHMARK(BM_FlipRevert);

void BM_ChainStep(benchmark::State& state) {
    const std::vector<ModelPtr> models{std::make_shared<CrttModel>(1.9), std::make_shared<AreaModel>(0.043, 1e4)};
    Chain chain(TTessellation::empty(unit_square()), models[state.range(0)], {}, 3);
    chain.run(20000);
    for (auto _ : state) {
        chain.step();
    }
    state.SetLabel(chain.model().name());
}
BENCHMARK(BM_ChainStep)->Arg(0)->Arg(1);

void BM_Validate(benchmark::State& state) {
    const auto t = equilibrium_state(1.9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(validate(t).ok());
    }
}
BENCHMARK(BM_Validate);

void BM_Enumerate(benchmark::State& state) {
    std::vector<Line> lines{{0.0, 0.4}, {kPi / 2.0, -0.6}, {0.7, 0.1}, {2.3, -0.3}};
    lines.resize(static_cast<std::size_t>(state.range(0)));
    const LinePattern p{lines, unit_square()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(nttl(p));
    }
}
BENCHMARK(BM_Enumerate)->DenseRange(2, 4);

}  // namespace

BENCHMARK_MAIN();
