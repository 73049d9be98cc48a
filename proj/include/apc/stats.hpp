#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "apc/rng.hpp"

namespace apc {

// ---------------------------------------------------------------------------
// Two-sample Kolmogorov-Smirnov test
// ---------------------------------------------------------------------------

struct KsResult {
  double d = 0.0;        // sup |ECDF_x - ECDF_y|
  double p_value = 1.0;  // asymptotic, small-sample corrected
};

// Throws std::domain_error on an empty sample. d is symmetric in the two
// samples and invariant under strictly monotone transforms of the pooled
// values.
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

// Asymptotic tail probability for a given statistic d and effective sample
// size n_e = |x||y| / (|x|+|y|):  p = 2 * sum_k (-1)^(k-1) exp(-2 k^2 l^2)
// with l = (sqrt(n_e) + 0.12 + 0.11/sqrt(n_e)) * d, terms truncated below
// 1e-10, result clamped to [0, 1].
double ks_p_value(double d, double effective_n);

// ---------------------------------------------------------------------------
// Entropy of a candidate two-way split of clustered values
// ---------------------------------------------------------------------------

enum class EntropyWeighting {
  cluster_size,  // side weights |p_j| / |c_j| (default)
  pooled,        // conventional |p_j| / (|p_1| + |p_2|)
};

// counts[0] / counts[1]: how many values of cluster 0 / cluster 1 landed on
// that side. cluster_sizes: total size of each cluster. Returns the weighted
// sum of the two side entropies (0*ln 0 == 0), or nullopt when either side or
// either cluster is empty (such candidates carry no information and must be
// skipped by the caller).
std::optional<double> entropy_of_split(
    std::array<std::size_t, 2> side1_counts,
    std::array<std::size_t, 2> side2_counts,
    std::array<std::size_t, 2> cluster_sizes,
    EntropyWeighting weighting = EntropyWeighting::cluster_size);

struct SplitCandidate {
  double split_value = 0.0;  // midpoint between two adjacent distinct values
  double score = 0.0;        // entropy at that split (lower is better)
};

// Scans every midpoint between adjacent distinct values and returns the one
// with minimal entropy (ties -> smallest split value). nullopt when fewer
// than two distinct values exist or one cluster is empty.
std::optional<SplitCandidate> best_entropy_split(
    std::span<const std::pair<double, int>> labeled_values,  // (value, cluster 0/1)
    EntropyWeighting weighting = EntropyWeighting::cluster_size);

// ---------------------------------------------------------------------------
// 2-means clustering (Lloyd's algorithm)
// ---------------------------------------------------------------------------

struct Kmeans2Result {
  std::vector<int> labels;  // 0 or 1 per point, both clusters non-empty
  bool degenerate = false;  // all points identical -> arbitrary balanced split
};

// Initial centroids are two distinct points chosen uniformly at random;
// iterates to a fixed point or at most 100 rounds. Throws std::domain_error
// for fewer than two points.
Kmeans2Result kmeans2(std::span<const std::vector<double>> points,
                      RngStream& rng);

// ---------------------------------------------------------------------------
// Best KS split of (key, value) points along the key axis
// ---------------------------------------------------------------------------

struct KeySplit {
  double split_value = 0.0;  // midpoint between adjacent distinct keys
  double d = 0.0;
  double p_value = 1.0;
};

// Considers every midpoint between adjacent distinct keys with at least
// min_side points on each side, runs the KS test on the two value samples and
// returns the candidate with the smallest p-value (ties -> smallest key).
// nullopt when no candidate qualifies.
std::optional<KeySplit> best_ks_key_split(
    std::vector<std::pair<double, double>> points,  // (key, value)
    std::size_t min_side = 2);

}  // namespace apc
