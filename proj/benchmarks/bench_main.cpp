#include <benchmark/benchmark.h>

#include "jkcov/baselines.hpp"
#include "jkcov/jackknife.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/regressors.hpp"
#include "jkcov/simgen.hpp"

using namespace jkcov;

namespace {

DataMatrix dense_data(std::size_t n, std::size_t p) {
    ModelSpec spec;
    spec.name = ModelName::dense_07;
    spec.p = p;
    return sample_gaussian(make_model(spec), n, 42);
}

RegressionDataset offdiag_features(std::size_t p) {
    auto x = dense_data(100, p);
    auto part = split_groups(100, 5, 1);
    auto stats = group_sufficient_stats(x, part, false);
    return build_offdiag_dataset(stats, 0);
}

} // namespace

static void BM_SampleCovariance(benchmark::State& state) {
    auto x = dense_data(100, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(x, false));
}
BENCHMARK(BM_SampleCovariance)->Arg(30)->Arg(100);

static void BM_ProjectPd(benchmark::State& state) {
    auto s = sample_covariance(dense_data(20, state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(project_pd(s, 1e-4));
}
BENCHMARK(BM_ProjectPd)->Arg(30)->Arg(100);

static void BM_LinearShrinkage(benchmark::State& state) {
    auto x = dense_data(100, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linear_shrinkage(x, false));
}
BENCHMARK(BM_LinearShrinkage)->Arg(30)->Arg(100);

static void BM_KnnFitPredict(benchmark::State& state) {
    auto data = offdiag_features(state.range(0));
    const std::size_t k = 20;
    for (auto _ : state) {
        auto model = fit_knn(data, k);
        benchmark::DoNotOptimize(predict_rows(FittedRegressor(model), data.features()));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_KnnFitPredict)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_ClusteredLrFit(benchmark::State& state) {
    auto data = offdiag_features(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit_clustered_lr(data, 10, 3));
}
BENCHMARK(BM_ClusteredLrFit)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_TreeFit(benchmark::State& state) {
    auto data = offdiag_features(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit_tree(data));
}
BENCHMARK(BM_TreeFit)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_JackknifeKnn(benchmark::State& state) {
    auto x = dense_data(100, state.range(0));
    auto cfg = knn_config();
    cfg.seed = 7;
    for (auto _ : state) benchmark::DoNotOptimize(estimate(x, cfg));
}
BENCHMARK(BM_JackknifeKnn)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
