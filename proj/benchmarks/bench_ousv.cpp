#include <benchmark/benchmark.h>

#include <memory>

#include <ousv/avgvar_dist.hpp>
#include <ousv/exact_pricer.hpp>
#include <ousv/mc_pricer.hpp>
#include <ousv/ou_process.hpp>

using namespace ousv;

namespace {

const OUParams kOu{1.0, 0.5, 0.0};
const VolSpec kExp = VolSpec::exp_clamped(0.2, 1.0, 0.05, 0.6);

std::shared_ptr<const AvgVarSamples> samples(std::size_t n) {
    return std::make_shared<const AvgVarSamples>(sample_avg_var(kOu, kExp, 1.0, n, 512, 7));
}

void BM_SimulateOu(benchmark::State& state) {
    const auto grid = TimeGrid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_ou(kOu, grid, 1, i++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateOu)->Arg(64)->Arg(512)->Arg(4096);

void BM_SampleAvgVar(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sample_avg_var(kOu, kExp, 1.0, static_cast<std::size_t>(state.range(0)), 512, 1));
}
BENCHMARK(BM_SampleAvgVar)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CharFnMc(benchmark::State& state) {
    const auto s = samples(static_cast<std::size_t>(state.range(0)));
    double u = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(char_fn_mc(*s, u));
        u += 0.5;
    }
}
BENCHMARK(BM_CharFnMc)->Arg(10000)->Arg(100000);

void BM_InversionBuild(benchmark::State& state) {
    const auto s = samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(InversionCdfProvider(s, inversion_spec_for(kExp)));
}
BENCHMARK(BM_InversionBuild)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_InversionCdf(benchmark::State& state) {
    const InversionCdfProvider inv(samples(10000), inversion_spec_for(kExp));
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(inv.variance_cdf(x));
        x = x < 0.2 ? x + 1e-3 : 0.01;
    }
}
BENCHMARK(BM_InversionCdf);

void BM_ExactPriceEmpirical(benchmark::State& state) {
    const EmpiricalCdfProvider emp(samples(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(exact_price(100.0, 90.0, 0.05, 1.0, emp));
}
BENCHMARK(BM_ExactPriceEmpirical)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_MixingFromSamples(benchmark::State& state) {
    const auto s = samples(100000);
    for (auto _ : state) benchmark::DoNotOptimize(mixing_from_samples(*s, 100.0, 90.0, 0.05, 1.0));
}
BENCHMARK(BM_MixingFromSamples)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
