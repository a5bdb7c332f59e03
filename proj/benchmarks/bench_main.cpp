#include <benchmark/benchmark.h>

#include "ortho/cluster_eval.hpp"
#include "ortho/datagen.hpp"
#include "ortho/kernel.hpp"
#include "ortho/orthogonalize.hpp"
#include "ortho/sinkhorn.hpp"
#include "ortho/spectral.hpp"

namespace {

using namespace ortho;

StochasticKernel blocks(int block_size) {
  const SyntheticData d = noisy_blocks({.block_size = block_size, .num_blocks = 3, .noise_scale = 10.0, .seed = 1});
  return row_normalize(SquareMatrix::affinity(floor_affinity(d.affinity)));
}

void BM_Decompose(benchmark::State& state) {
  const StochasticKernel p = blocks(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(p));
}
BENCHMARK(BM_Decompose)->Arg(50)->Arg(100)->Arg(200);

void BM_DistanceDirect(benchmark::State& state) {
  const StochasticKernel p = blocks(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diffusion_distance_matrix(p));
}
BENCHMARK(BM_DistanceDirect)->Arg(50)->Arg(100)->Arg(200);

void BM_DistanceTruncated(benchmark::State& state) {
  const SpectralDecomposition s = decompose(blocks(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(diffusion_distance_truncated(s, 20));
}
BENCHMARK(BM_DistanceTruncated)->Arg(50)->Arg(100)->Arg(200);

void BM_OrthoStep(benchmark::State& state) {
  const StochasticKernel q = blocks(static_cast<int>(state.range(0)));
  const OrthoConfig cfg;
  const double c2 = effective_c2(cfg, diffusion_distance_matrix(q));
  for (auto _ : state) benchmark::DoNotOptimize(ortho_step(q, q, cfg, c2));
}
BENCHMARK(BM_OrthoStep)->Arg(50)->Arg(100)->Arg(200);

void BM_Sinkhorn(benchmark::State& state) {
  const Matrix k = *blocks(static_cast<int>(state.range(0))).symmetric_numerator();
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_sinkhorn(k));
}
BENCHMARK(BM_Sinkhorn)->Arg(50)->Arg(100)->Arg(200);

void BM_KMeans(benchmark::State& state) {
  const int n_per = static_cast<int>(state.range(0));
  const PointCloud cloud = gaussian_blobs(n_per, {{0.0, 0.0}, {3.0, 0.0}, {0.0, 3.0}}, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(cloud.points, 3, 0, 10));
}
BENCHMARK(BM_KMeans)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
