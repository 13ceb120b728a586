#include <benchmark/benchmark.h>

#include <vector>

#include "pukit/model.hpp"
#include "pukit/random.hpp"
#include "pukit/train.hpp"

namespace {

std::vector<pukit::FeatureVector> cloud(std::size_t n, double cx, pukit::Rng& rng) {
    std::vector<pukit::FeatureVector> xs(n);
    for (auto& x : xs) x = {cx + rng.normal(), rng.normal()};
    return xs;
}

void bm_sgd_epoch_logistic(benchmark::State& state) {
    pukit::Rng data_rng(1);
    const auto pos = cloud(1000, 1.0, data_rng);
    const auto neg = cloud(1000, -1.0, data_rng);
    pukit::Rng init(2);
    pukit::LogisticModel model(2, init);
    pukit::MomentumSgd opt(model.param_count());
    pukit::TrainConfig cfg;
    pukit::Rng rng(3);
    for (auto _ : state) {
        pukit::sgd_epoch(model, pos, neg, 1.0, 1.0, cfg, rng, opt);
    }
}

void bm_sgd_epoch_mlp(benchmark::State& state) {
    pukit::Rng data_rng(1);
    const auto pos = cloud(1000, 1.0, data_rng);
    const auto neg = cloud(1000, -1.0, data_rng);
    pukit::Rng init(2);
    pukit::MLPModel model(2, 64, init);
    pukit::MomentumSgd opt(model.param_count());
    pukit::TrainConfig cfg;
    pukit::Rng rng(3);
    for (auto _ : state) {
        pukit::sgd_epoch(model, pos, neg, 1.0, 1.0, cfg, rng, opt);
    }
}

void bm_rank_and_discard(benchmark::State& state) {
    pukit::Rng data_rng(1);
    const auto unl = cloud(static_cast<std::size_t>(state.range(0)), 0.0, data_rng);
    pukit::Rng init(2);
    pukit::LogisticModel model(2, init);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pukit::rank_and_discard(model, unl, 0.5));
    }
}

}  // namespace

BENCHMARK(bm_sgd_epoch_logistic);
BENCHMARK(bm_sgd_epoch_mlp);
BENCHMARK(bm_rank_and_discard)->Arg(100000);

BENCHMARK_MAIN();
