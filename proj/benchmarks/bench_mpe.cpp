#include <benchmark/benchmark.h>

#include <vector>

#include "pukit/ecdf.hpp"
#include "pukit/mpe.hpp"
#include "pukit/random.hpp"

namespace {

std::vector<double> mixed_scores(std::size_t n, bool unlabeled, pukit::RandomSeed seed) {
    pukit::Rng rng(seed);
    std::vector<double> z(n);
    for (auto& v : z) {
        const bool pos = !unlabeled || rng.bernoulli(0.5);
        v = pos ? rng.uniform(0.3, 1.0) : rng.uniform(0.0, 0.7);
    }
    return z;
}

void bm_tail_cdf_build(benchmark::State& state) {
    const auto z = mixed_scores(static_cast<std::size_t>(state.range(0)), false, 1);
    for (auto _ : state) {
        pukit::TailCDF cdf(z);
        benchmark::DoNotOptimize(cdf.size());
    }
}

void bm_tail_cdf_eval(benchmark::State& state) {
    const auto z = mixed_scores(static_cast<std::size_t>(state.range(0)), false, 1);
    const pukit::TailCDF cdf(z);
    double c = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cdf.eval(c));
        c += 1.0 / 1024.0;
        if (c > 1.0) c = 0.0;
    }
}

void bm_bbe(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto zp = mixed_scores(n, false, 1);
    const auto zu = mixed_scores(n, true, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pukit::bbe_estimate(zp, zu));
    }
}

void bm_scott(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto zp = mixed_scores(n, false, 1);
    const auto zu = mixed_scores(n, true, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pukit::scott_estimate(zp, zu));
    }
}

}  // namespace

BENCHMARK(bm_tail_cdf_build)->Arg(1000)->Arg(10000);
BENCHMARK(bm_tail_cdf_eval)->Arg(10000);
BENCHMARK(bm_bbe)->Arg(1000)->Arg(10000);
BENCHMARK(bm_scott)->Arg(1000);

BENCHMARK_MAIN();
