#include "apc/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apc {

Partition Partition::whole(double lo, double hi) {
  Partition p;
  p.ivals_.push_back(Interval{lo, hi, true, true});
  p.validate();
  return p;
}

Partition Partition::equal_intervals(double lo, double hi, int m) {
  if (m < 1) throw std::domain_error("equal_intervals: m must be >= 1");
  std::vector<double> cuts;
  cuts.reserve(static_cast<std::size_t>(m) - 1);
  for (int i = 1; i < m; ++i)
    cuts.push_back(lo + (hi - lo) * static_cast<double>(i) / m);
  return from_cuts(lo, hi, std::move(cuts));
}

Partition Partition::from_cuts(double lo, double hi, std::vector<double> cuts) {
  if (!(lo < hi)) throw std::domain_error("from_cuts: empty range");
  Partition p;
  double prev = lo;
  bool first = true;
  for (double c : cuts) {
    if (!(c > prev && c < hi))
      throw std::domain_error("from_cuts: cuts must be strictly increasing inside the range");
    p.ivals_.push_back(Interval{prev, c, first, true});
    prev = c;
    first = false;
  }
  p.ivals_.push_back(Interval{prev, hi, first, true});
  p.validate();
  return p;
}

void Partition::validate() const {
  if (ivals_.empty()) throw std::logic_error("partition: no intervals");
  for (std::size_t i = 0; i < ivals_.size(); ++i) {
    const Interval& iv = ivals_[i];
    if (!(iv.lo < iv.hi) && ivals_.size() > 1)
      throw std::logic_error("partition: degenerate interval");
    if (iv.lo > iv.hi) throw std::logic_error("partition: inverted interval");
    const bool want_lo_closed = (i == 0);
    if (iv.lo_closed != want_lo_closed || !iv.hi_closed)
      throw std::logic_error("partition: endpoint convention violated");
    if (i > 0 && ivals_[i - 1].hi != iv.lo)
      throw std::logic_error("partition: intervals not contiguous");
  }
}

std::size_t Partition::index_of(double x) const {
  if (std::isnan(x) || x < lo() || x > hi())
    throw std::domain_error("index_of: value outside the partitioned range");
  // first interval whose high end is >= x; the shared boundary belongs to the
  // lower interval (closed high end)
  std::size_t a = 0, b = ivals_.size() - 1;
  while (a < b) {
    const std::size_t mid = (a + b) / 2;
    if (ivals_[mid].hi >= x)
      b = mid;
    else
      a = mid + 1;
  }
  return a;
}

std::vector<double> Partition::cuts() const {
  std::vector<double> out;
  out.reserve(ivals_.size() - 1);
  for (std::size_t i = 0; i + 1 < ivals_.size(); ++i) out.push_back(ivals_[i].hi);
  return out;
}

double QTable::value() const {
  double best = 0.0;
  bool any = false;
  for (double v : q_) {
    if (!any || v > best) best = v;
    any = true;
  }
  return any ? best : 0.0;
}

double QTable::spread() const {
  if (q_.size() < 2) return 0.0;
  auto [lo, hi] = std::minmax_element(q_.begin(), q_.end());
  return *hi - *lo;
}

std::size_t QTable::greedy(RngStream& rng) const {
  if (q_.empty()) throw std::logic_error("greedy: empty table");
  double best = q_[0];
  std::size_t ties = 1;
  for (std::size_t a = 1; a < q_.size(); ++a) {
    if (q_[a] > best) {
      best = q_[a];
      ties = 1;
    } else if (q_[a] == best) {
      ++ties;
    }
  }
  if (ties == 1) {
    for (std::size_t a = 0; a < q_.size(); ++a)
      if (q_[a] == best) return a;
  }
  std::uint64_t pick = rng.below(ties);
  for (std::size_t a = 0; a < q_.size(); ++a) {
    if (q_[a] == best) {
      if (pick == 0) return a;
      --pick;
    }
  }
  return q_.size() - 1;  // unreachable
}

std::size_t epsilon_greedy(const QTable& q, double eps, RngStream& rng) {
  if (q.size() == 0) throw std::logic_error("epsilon_greedy: empty table");
  if (rng.next_double() < eps) return rng.below(q.size());
  return q.greedy(rng);
}

}  // namespace apc
