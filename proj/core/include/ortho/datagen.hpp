#pragma once

#include <cstdint>
#include <vector>

#include "ortho/cluster_eval.hpp"
#include "ortho/types.hpp"

namespace ortho {

/// Floor applied to zero entries of a generated affinity before it is used
/// as a kernel.
inline constexpr double kAffinityFloor = 1e-12;

struct SyntheticSpec {
  int block_size = 50;
  int num_blocks = 3;
  double noise_scale = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  Matrix affinity;  // symmetric, entries >= 0 (not yet floored)
  Labeling truth;
};

/// noise_scale * S + blockdiag(S_1, ..., S_b) where every S is a symmetric
/// matrix of Uniform[0,1] draws (upper triangle incl. diagonal, mirrored).
/// The noise matrix uses stream 0 of the seed, block k uses stream k + 1.
SyntheticData noisy_blocks(const SyntheticSpec& spec);

/// Replaces entries below kAffinityFloor with kAffinityFloor.
Matrix floor_affinity(Matrix affinity);

struct PointCloud {
  Matrix points;
  Labeling truth;
};

/// n_per isotropic Gaussian samples around each center (center c uses
/// stream c of the seed). sigma = 0 places every point on its center.
PointCloud gaussian_blobs(int n_per, const std::vector<std::vector<double>>& centers, double sigma,
                          std::uint64_t seed);

}  // namespace ortho
