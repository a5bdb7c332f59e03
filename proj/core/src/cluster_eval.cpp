#include "ortho/cluster_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "ortho/errors.hpp"
#include "ortho/random.hpp"

namespace ortho {

namespace {
__extension__ using Wide = __int128;
}  // namespace

Labeling::Labeling(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    k_ = 0;
    return;
  }
  const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
  if (*lo < 0) throw InvalidInput("labeling: negative cluster id");
  k_ = *hi + 1;
  std::vector<bool> seen(static_cast<std::size_t>(k_), false);
  for (int id : labels_) seen[static_cast<std::size_t>(id)] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InvalidInput("labeling: cluster ids must be contiguous from 0 with no empty cluster");
  }
}

Labeling Labeling::compact(std::span<const int> raw) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(raw.size());
  for (int id : raw) {
    auto [it, inserted] = remap.try_emplace(id, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return Labeling(std::move(out));
}

ClusterCountEstimate estimate_num_clusters(const SpectralDecomposition& s) {
  const Index n = s.size();
  ClusterCountEstimate out;
  out.spectral_sum = s.eigenvalues.sum();
  const double rounded = std::round(out.spectral_sum);
  out.trace_estimate = static_cast<std::size_t>(std::clamp(rounded, 1.0, static_cast<double>(n)));
  const Index leading = std::min<Index>(n - 1, 50);
  double best_gap = -std::numeric_limits<double>::infinity();
  out.gap_estimate = 1;
  for (Index l = 0; l < leading; ++l) {
    const double gap = s.eigenvalues[l] - s.eigenvalues[l + 1];
    if (gap > best_gap) {
      best_gap = gap;
      out.gap_estimate = static_cast<std::size_t>(l + 1);
    }
  }
  return out;
}

namespace {

double sq_dist(const Matrix& coords, Index i, const Matrix& centroids, Index c) {
  return (coords.row(i) - centroids.row(c)).squaredNorm();
}

Matrix kmeanspp_seed(const Matrix& coords, int k, Rng& rng) {
  const Index n = coords.rows();
  Matrix centroids(k, coords.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = coords.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  Vector nearest(n);
  for (Index i = 0; i < n; ++i) nearest[i] = sq_dist(coords, i, centroids, 0);
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += nearest[i];
        if (acc > target && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Index i = n - 1; i >= 0; --i) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // every point coincides with a chosen centroid; take the next unused index
      for (Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = coords.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    for (Index i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], sq_dist(coords, i, centroids, c));
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<int> assignment;
  Matrix centroids;
  double wcss = 0.0;
};

LloydOutcome lloyd(const Matrix& coords, Matrix centroids, std::size_t max_iter) {
  const Index n = coords.rows();
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(coords, i, centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(coords, i, centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[static_cast<std::size_t>(i)] != best) {
        assignment[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Matrix sums = Matrix::Zero(k, coords.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = assignment[static_cast<std::size_t>(i)];
      sums.row(c) += coords.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const double d = sq_dist(coords, i, centroids, assignment[static_cast<std::size_t>(i)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids.row(c) = coords.row(far);
      assignment[static_cast<std::size_t>(far)] = c;
    }
  }
  double wcss = 0.0;
  for (Index i = 0; i < n; ++i) wcss += sq_dist(coords, i, centroids, assignment[static_cast<std::size_t>(i)]);
  return {std::move(assignment), std::move(centroids), wcss};
}

}  // namespace

KMeansResult kmeans(const Matrix& coords, int k, std::uint64_t seed, int restarts, std::size_t max_iter) {
  const Index n = coords.rows();
  if (n == 0 || coords.cols() == 0) throw InvalidInput("kmeans: empty coordinate matrix");
  if (!coords.allFinite()) throw InvalidInput("kmeans: non-finite coordinate");
  if (k < 1 || k > n) throw InvalidInput("kmeans: k must lie in [1, n], got " + std::to_string(k));
  if (restarts < 1) throw InvalidInput("kmeans: restarts must be >= 1");

  std::optional<LloydOutcome> best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r));
    LloydOutcome run = lloyd(coords, kmeanspp_seed(coords, k, rng), max_iter);
    if (!best || run.wcss < best->wcss) best = std::move(run);
  }
  // Canonical ids: order of first appearance; centroids permuted to match.
  Labeling labeling = Labeling::compact(best->assignment);
  Matrix centroids(labeling.k(), coords.cols());
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    centroids.row(labeling[i]) = best->centroids.row(best->assignment[i]);
  }
  return KMeansResult{std::move(labeling), std::move(centroids), best->wcss};
}

std::vector<std::vector<long long>> contingency_table(const Labeling& pred, const Labeling& truth) {
  if (pred.size() != truth.size()) {
    throw InvalidInput("labelings differ in length: " + std::to_string(pred.size()) + " vs " +
                       std::to_string(truth.size()));
  }
  std::vector<std::vector<long long>> table(static_cast<std::size_t>(pred.k()),
                                            std::vector<long long>(static_cast<std::size_t>(truth.k()), 0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++table[static_cast<std::size_t>(pred[i])][static_cast<std::size_t>(truth[i])];
  }
  return table;
}

double purity(const Labeling& pred, const Labeling& truth) {
  const auto table = contingency_table(pred, truth);
  if (pred.size() == 0) throw InvalidInput("purity: empty labeling");
  long long hits = 0;
  for (const auto& row : table) hits += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double nmi(const Labeling& pred, const Labeling& truth) {
  const auto table = contingency_table(pred, truth);
  const double n = static_cast<double>(pred.size());
  if (pred.size() == 0) throw InvalidInput("nmi: empty labeling");
  std::vector<double> a(table.size(), 0.0);
  std::vector<double> b(static_cast<std::size_t>(truth.k()), 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      a[i] += static_cast<double>(table[i][j]);
      b[j] += static_cast<double>(table[i][j]);
    }
  }
  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0.0;
    for (double c : counts) {
      if (c > 0.0) h -= (c / n) * std::log(c / n);
    }
    return h;
  };
  const double ha = entropy(a);
  const double hb = entropy(b);
  double mi = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double nij = static_cast<double>(table[i][j]);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (a[i] * b[j]));
    }
  }
  if (ha == 0.0 && hb == 0.0) return 1.0;  // both single-cluster: identical partitions
  if (ha == 0.0 || hb == 0.0) return 0.0;
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

double ari(const Labeling& pred, const Labeling& truth) {
  const auto table = contingency_table(pred, truth);
  if (pred.size() < 2) throw InvalidInput("ari: needs at least two points");
  // Pair counts are integers; the ratio is formed in 128-bit integers and
  // rounded once, so simple cases come out exact.
  auto comb2 = [](long long x) -> Wide { return static_cast<Wide>(x) * (x - 1) / 2; };
  std::vector<long long> a(table.size(), 0);
  std::vector<long long> b(static_cast<std::size_t>(truth.k()), 0);
  Wide index = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      index += comb2(table[i][j]);
      a[i] += table[i][j];
      b[j] += table[i][j];
    }
  }
  Wide sum_a = 0;
  Wide sum_b = 0;
  for (long long x : a) sum_a += comb2(x);
  for (long long x : b) sum_b += comb2(x);
  const Wide total = comb2(static_cast<long long>(pred.size()));
  // (index - A B / T) / ((A + B) / 2 - A B / T), multiplied through by 2T.
  const Wide num = 2 * (total * index - sum_a * sum_b);
  const Wide den = total * (sum_a + sum_b) - 2 * sum_a * sum_b;
  if (den == 0) return 1.0;  // only reachable for identical trivial partitions
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

MetricReport evaluate(const Labeling& pred, const Labeling& truth) {
  return MetricReport{ari(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

}  // namespace ortho
