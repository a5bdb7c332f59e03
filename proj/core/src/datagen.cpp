#include "ortho/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ortho/errors.hpp"
#include "ortho/random.hpp"

namespace ortho {

namespace {

Matrix symmetric_uniform(Index n, Rng& rng) {
  Matrix s(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double v = rng.uniform_closed();
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (block_size < 1) throw InvalidInput("synthetic spec: block_size must be >= 1");
  if (num_blocks < 1) throw InvalidInput("synthetic spec: num_blocks must be >= 1");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw InvalidInput("synthetic spec: noise_scale must be finite and >= 0");
}

SyntheticData noisy_blocks(const SyntheticSpec& spec) {
  spec.validate();
  const Index n = static_cast<Index>(spec.block_size) * spec.num_blocks;
  Rng noise_rng(spec.seed, 0);
  Matrix q = spec.noise_scale * symmetric_uniform(n, noise_rng);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int b = 0; b < spec.num_blocks; ++b) {
    Rng block_rng(spec.seed, static_cast<std::uint64_t>(b) + 1);
    const Index offset = static_cast<Index>(b) * spec.block_size;
    q.block(offset, offset, spec.block_size, spec.block_size) += symmetric_uniform(spec.block_size, block_rng);
    std::fill_n(labels.begin() + offset, spec.block_size, b);
  }
  return SyntheticData{std::move(q), Labeling(std::move(labels))};
}

Matrix floor_affinity(Matrix affinity) { return affinity.array().max(kAffinityFloor).matrix(); }

PointCloud gaussian_blobs(int n_per, const std::vector<std::vector<double>>& centers, double sigma,
                          std::uint64_t seed) {
  if (n_per < 1) throw InvalidInput("gaussian_blobs: n_per must be >= 1");
  if (centers.empty()) throw InvalidInput("gaussian_blobs: at least one center required");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("gaussian_blobs: sigma must be >= 0");
  const std::size_t dim = centers.front().size();
  if (dim == 0) throw InvalidInput("gaussian_blobs: centers must have dimension >= 1");
  for (const auto& c : centers) {
    if (c.size() != dim) throw InvalidInput("gaussian_blobs: centers differ in dimension");
  }
  const Index n = static_cast<Index>(n_per) * static_cast<Index>(centers.size());
  PointCloud out;
  out.points.resize(n, static_cast<Index>(dim));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < centers.size(); ++c) {
    Rng rng(seed, c);
    for (int k = 0; k < n_per; ++k) {
      const Index row = static_cast<Index>(c) * n_per + k;
      for (std::size_t d = 0; d < dim; ++d) {
        out.points(row, static_cast<Index>(d)) = centers[c][d] + sigma * rng.normal();
      }
      labels[static_cast<std::size_t>(row)] = static_cast<int>(c);
    }
  }
  out.truth = Labeling(std::move(labels));
  return out;
}

}  // namespace ortho
