// Serial-vs-OpenMP timing for the three data-parallel kernels. The two
// policies are required to return bit-identical results, so this target is
// purely about throughput.

#include <benchmark/benchmark.h>

#include "bussgang/gains.hpp"
#include "bussgang/metrics.hpp"

using namespace bussgang;

namespace {

Scenario class_a_scenario() {
    const MixtureSpec noise = class_a_mixture(ClassAParams{0.01, 0.01, 1.0, 1e-12});
    return Scenario(ScalarDistribution::gaussian(1.0), ScalarDistribution::mixture(noise), 0.0,
                    SoftLimiter{std::sqrt(2.0)});
}

McSettings mc_with(Exec exec, std::int64_t n) {
    McSettings mc;
    mc.n_samples = n;
    mc.seed = 1;
    mc.exec = exec;
    return mc;
}

void bm_sample(benchmark::State& state, Exec exec) {
    const ScalarDistribution d =
        ScalarDistribution::mixture(class_a_mixture(ClassAParams{0.01, 0.01, 1.0, 1e-12}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(d.sample(1 << 20, 7, exec));
    }
    state.SetItemsProcessed(state.iterations() * (1 << 20));
}

void bm_empirical_gains(benchmark::State& state, Exec exec) {
    const Scenario s = class_a_scenario();
    const McSettings mc = mc_with(exec, 1 << 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gains_empirical(s, mc));
    }
    state.SetItemsProcessed(state.iterations() * (1 << 20));
}

void bm_mi_histogram(benchmark::State& state, Exec exec) {
    const Scenario s = class_a_scenario();
    const McSettings mc = mc_with(exec, 1 << 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mutual_information_histogram(s, 256, 8.0, mc));
    }
    state.SetItemsProcessed(state.iterations() * (1 << 20));
}

}  // namespace

BENCHMARK_CAPTURE(bm_sample, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_sample, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_empirical_gains, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_empirical_gains, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_mi_histogram, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_mi_histogram, parallel, Exec::parallel);

BENCHMARK_MAIN();
