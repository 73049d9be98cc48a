#include "apc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apc {

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty())
    throw std::domain_error("ks_two_sample: empty sample");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  if (i < a.size()) d = std::max(d, 1.0 - static_cast<double>(j) / nb);
  if (j < b.size()) d = std::max(d, 1.0 - static_cast<double>(i) / na);

  const double ne = na * nb / (na + nb);
  return KsResult{d, ks_p_value(d, ne)};
}

double ks_p_value(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

// -w1*ln(w1) - w2*ln(w2) over the two cluster shares of one side
double side_entropy(std::size_t c0, std::size_t c1) {
  const double n = static_cast<double>(c0 + c1);
  double e = 0.0;
  if (c0 > 0) {
    const double w = static_cast<double>(c0) / n;
    e -= w * std::log(w);
  }
  if (c1 > 0) {
    const double w = static_cast<double>(c1) / n;
    e -= w * std::log(w);
  }
  return e;
}

}  // namespace

std::optional<double> entropy_of_split(std::array<std::size_t, 2> s1,
                                       std::array<std::size_t, 2> s2,
                                       std::array<std::size_t, 2> cluster_sizes,
                                       EntropyWeighting weighting) {
  const std::size_t n1 = s1[0] + s1[1];
  const std::size_t n2 = s2[0] + s2[1];
  if (n1 == 0 || n2 == 0) return std::nullopt;
  if (cluster_sizes[0] == 0 || cluster_sizes[1] == 0) return std::nullopt;

  const double e1 = side_entropy(s1[0], s1[1]);
  const double e2 = side_entropy(s2[0], s2[1]);
  double w1, w2;
  if (weighting == EntropyWeighting::cluster_size) {
    w1 = static_cast<double>(n1) / static_cast<double>(cluster_sizes[0]);
    w2 = static_cast<double>(n2) / static_cast<double>(cluster_sizes[1]);
  } else {
    const double n = static_cast<double>(n1 + n2);
    w1 = static_cast<double>(n1) / n;
    w2 = static_cast<double>(n2) / n;
  }
  return w1 * e1 + w2 * e2;
}

std::optional<SplitCandidate> best_entropy_split(
    std::span<const std::pair<double, int>> labeled_values,
    EntropyWeighting weighting) {
  if (labeled_values.size() < 2) return std::nullopt;
  std::vector<std::pair<double, int>> v(labeled_values.begin(),
                                        labeled_values.end());
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::array<std::size_t, 2> total{0, 0};
  for (const auto& [val, c] : v) {
    if (c != 0 && c != 1)
      throw std::domain_error("best_entropy_split: cluster label must be 0 or 1");
    ++total[static_cast<std::size_t>(c)];
  }
  if (total[0] == 0 || total[1] == 0) return std::nullopt;

  std::optional<SplitCandidate> best;
  std::array<std::size_t, 2> left{0, 0};
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    ++left[static_cast<std::size_t>(v[i].second)];
    if (v[i].first == v[i + 1].first) continue;
    const double split = v[i].first + (v[i + 1].first - v[i].first) / 2.0;
    const std::array<std::size_t, 2> right{total[0] - left[0],
                                           total[1] - left[1]};
    const auto h = entropy_of_split(left, right, total, weighting);
    if (!h) continue;
    if (!best || *h < best->score) best = SplitCandidate{split, *h};
  }
  return best;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Kmeans2Result kmeans2(std::span<const std::vector<double>> points,
                      RngStream& rng) {
  const std::size_t n = points.size();
  if (n < 2) throw std::domain_error("kmeans2: need at least two points");
  for (const auto& p : points)
    if (p.size() != points[0].size())
      throw std::domain_error("kmeans2: inconsistent point dimensions");

  const std::size_t i0 = static_cast<std::size_t>(rng.below(n));
  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < n; ++i)
    if (points[i] != points[i0]) distinct.push_back(i);

  Kmeans2Result res;
  res.labels.assign(n, 0);
  if (distinct.empty()) {
    // all points identical: arbitrary balanced split
    for (std::size_t i = 0; i < n; ++i) res.labels[i] = static_cast<int>(i % 2);
    res.degenerate = true;
    return res;
  }
  const std::size_t i1 = distinct[rng.below(distinct.size())];

  std::array<std::vector<double>, 2> centroid{points[i0], points[i1]};
  for (int round = 0; round < 100; ++round) {
    bool changed = round == 0;
    std::array<std::size_t, 2> count{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int lab =
          sq_dist(points[i], centroid[0]) <= sq_dist(points[i], centroid[1])
              ? 0
              : 1;
      if (lab != res.labels[i]) {
        res.labels[i] = lab;
        changed = true;
      }
      ++count[static_cast<std::size_t>(lab)];
    }
    // guard: reassign the point farthest from the surviving centroid
    for (int c = 0; c < 2; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = sq_dist(points[i], centroid[static_cast<std::size_t>(1 - c)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      res.labels[far] = c;
      ++count[static_cast<std::size_t>(c)];
      --count[static_cast<std::size_t>(1 - c)];
      changed = true;
    }
    if (!changed) break;
    const std::size_t dim = points[0].size();
    for (auto& c : centroid) c.assign(dim, 0.0);
    std::array<std::size_t, 2> m{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const auto lab = static_cast<std::size_t>(res.labels[i]);
      ++m[lab];
      for (std::size_t k = 0; k < dim; ++k) centroid[lab][k] += points[i][k];
    }
    for (int c = 0; c < 2; ++c)
      for (std::size_t k = 0; k < dim; ++k)
        centroid[static_cast<std::size_t>(c)][k] /= static_cast<double>(m[static_cast<std::size_t>(c)]);
  }
  return res;
}

std::optional<KeySplit> best_ks_key_split(
    std::vector<std::pair<double, double>> points, std::size_t min_side) {
  const std::size_t n = points.size();
  if (min_side < 1) min_side = 1;
  if (n < 2 * min_side) return std::nullopt;
  std::sort(points.begin(), points.end());

  // rank-compress the values so per-candidate D is a single pass over ranks
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = points[i].second;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  const std::size_t u = vals.size();

  std::vector<std::size_t> rank(n);
  std::vector<std::size_t> total(u, 0);
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::size_t>(
        std::lower_bound(vals.begin(), vals.end(), points[i].second) -
        vals.begin());
    ++total[rank[i]];
  }

  std::vector<std::size_t> left(u, 0);
  std::optional<KeySplit> best;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ++left[rank[i]];
    const std::size_t nl = i + 1, nr = n - nl;
    if (nl < min_side || nr < min_side) continue;
    if (points[i].first == points[i + 1].first) continue;

    double d = 0.0;
    std::size_t cl = 0, ct = 0;
    for (std::size_t k = 0; k < u; ++k) {
      cl += left[k];
      ct += total[k];
      d = std::max(d, std::fabs(static_cast<double>(cl) / nl -
                                static_cast<double>(ct - cl) / nr));
    }
    const double ne = static_cast<double>(nl) * static_cast<double>(nr) /
                      static_cast<double>(n);
    const double p = ks_p_value(d, ne);
    if (!best || p < best->p_value) {
      const double split =
          points[i].first + (points[i + 1].first - points[i].first) / 2.0;
      best = KeySplit{split, d, p};
    }
  }
  return best;
}

}  // namespace apc
