// Serial reference kernels against their OpenMP counterparts.

#include "bwflow/data.hpp"
#include "bwflow/denoiser.hpp"
#include "bwflow/flow.hpp"
#include "bwflow/interp.hpp"
#include "bwflow/linalg.hpp"
#include "bwflow/stats.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace bwflow;

Matrix bench_laplacian(Index n, std::uint64_t variant = 0) {
    Rng rng = substream(1 + variant, "bench-laplacian", static_cast<std::uint64_t>(n));
    Graph g = er_sample(n, 0.3, rng);
    for (Index i = 0; i + 1 < n; ++i) g.w(i, i + 1) = g.w(i + 1, i) = 1.0;
    return laplacian(g.w);
}

void BM_PinvLsqrSerial(benchmark::State& state) {
    const Matrix l = bench_laplacian(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linalg::serial::pinv_via_lsqr(l, 500, 1e-12));
}

void BM_PinvLsqrParallel(benchmark::State& state) {
    const Matrix l = bench_laplacian(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linalg::pinv_via_lsqr(l, 500, 1e-12));
}

std::vector<Vector> bench_histograms(std::size_t count, const char* name) {
    std::vector<Graph> graphs;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = substream(2, name, i);
        graphs.push_back(er_sample(20, 0.2, rng));
    }
    return stat_histograms(graphs, StatDescriptor::standard(StatKind::degree));
}

void BM_MmdSerial(benchmark::State& state) {
    const auto a = bench_histograms(static_cast<std::size_t>(state.range(0)), "a");
    const auto b = bench_histograms(static_cast<std::size_t>(state.range(0)), "b");
    for (auto _ : state) benchmark::DoNotOptimize(serial::mmd_sq(a, b, 0.5));
}

void BM_MmdParallel(benchmark::State& state) {
    const auto a = bench_histograms(static_cast<std::size_t>(state.range(0)), "a");
    const auto b = bench_histograms(static_cast<std::size_t>(state.range(0)), "b");
    for (auto _ : state) benchmark::DoNotOptimize(mmd_sq(a, b, 0.5));
}

struct SamplerFixture {
    std::vector<Graph> train;
    std::vector<Graph> g0s;
    FlowConfig cfg;

    explicit SamplerFixture(std::size_t chains) {
        for (std::size_t i = 0; i < 50; ++i) {
            Rng rng = substream(3, "train", i);
            train.push_back(tree_sample(16, rng));
        }
        const ReferenceDistribution ref = estimate_marginal(train);
        for (std::size_t i = 0; i < chains; ++i) {
            Rng rng = substream(3, "reference", i);
            g0s.push_back(draw_reference(ref, 16, 0, rng));
        }
        cfg.steps = 50;
        cfg.seed = 3;
    }
};

void BM_SampleBatchSerial(benchmark::State& state) {
    const SamplerFixture f(static_cast<std::size_t>(state.range(0)));
    const KnnDenoiser denoiser(f.train, 1);
    for (auto _ : state) benchmark::DoNotOptimize(serial::sample_batch(denoiser, f.g0s, f.cfg));
}

void BM_SampleBatchParallel(benchmark::State& state) {
    const SamplerFixture f(static_cast<std::size_t>(state.range(0)));
    const KnnDenoiser denoiser(f.train, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_batch(denoiser, f.g0s, f.cfg));
}

std::pair<GraphMRF, GraphMRF> sweep_pair(Index n) {
    return {GraphMRF{Matrix::Zero(n, 0), bench_laplacian(n, 0), 0.0, 1.0},
            GraphMRF{Matrix::Zero(n, 0), bench_laplacian(n, 1), 0.0, 1.0}};
}

void BM_PathSweepSerial(benchmark::State& state) {
    const auto [a, b] = sweep_pair(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(serial::path_sweep(a, b, {}, 32));
}

void BM_PathSweepParallel(benchmark::State& state) {
    const auto [a, b] = sweep_pair(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(path_sweep(a, b, {}, 32));
}

}  // namespace

BENCHMARK(BM_PinvLsqrSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_PinvLsqrParallel)->Arg(16)->Arg(64);
BENCHMARK(BM_MmdSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_MmdParallel)->Arg(100)->Arg(400);
BENCHMARK(BM_SampleBatchSerial)->Arg(16);
BENCHMARK(BM_SampleBatchParallel)->Arg(16);
BENCHMARK(BM_PathSweepSerial)->Arg(16)->Arg(48);
BENCHMARK(BM_PathSweepParallel)->Arg(16)->Arg(48);

BENCHMARK_MAIN();
