#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ortho/spectral.hpp"
#include "ortho/types.hpp"

namespace ortho {

/// Cluster ids in [0, k), every cluster non-empty.
class Labeling {
 public:
  Labeling() = default;

  /// Validates contiguity and non-emptiness; k is max id + 1.
  explicit Labeling(std::vector<int> labels);

  /// Relabels arbitrary integer ids to 0..k-1 in order of first appearance.
  static Labeling compact(std::span<const int> raw);

  std::size_t size() const noexcept { return labels_.size(); }
  int k() const noexcept { return k_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

struct MetricReport {
  double ari = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

struct ClusterCountEstimate {
  std::size_t trace_estimate = 1;  // round(sum lambda), clamped to [1, n]
  std::size_t gap_estimate = 1;    // 1-based l maximizing lambda_l - lambda_{l+1}
  double spectral_sum = 0.0;
};

ClusterCountEstimate estimate_num_clusters(const SpectralDecomposition& s);

struct KMeansResult {
  Labeling labeling;
  Matrix centroids;
  double wcss = 0.0;
};

/// Lloyd iterations with k-means++ seeding; best of `restarts` by
/// within-cluster sum of squares. Deterministic for fixed (coords, k,
/// seed, restarts). A centroid that loses all its points is re-seeded at
/// the point farthest from its current centroid.
KMeansResult kmeans(const Matrix& coords, int k, std::uint64_t seed, int restarts = 10,
                    std::size_t max_iter = 300);

double purity(const Labeling& pred, const Labeling& truth);
double nmi(const Labeling& pred, const Labeling& truth);
double ari(const Labeling& pred, const Labeling& truth);
MetricReport evaluate(const Labeling& pred, const Labeling& truth);

/// Contingency counts n_ij = |pred == i and truth == j|.
std::vector<std::vector<long long>> contingency_table(const Labeling& pred, const Labeling& truth);

}  // namespace ortho
