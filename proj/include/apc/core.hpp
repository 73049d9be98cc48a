#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "apc/rng.hpp"

namespace apc {

// A controlled parameter and its admissible range [min, max], min < max.
struct ParameterSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
};

// One piece of a partitioned range. Endpoint convention: the first interval
// of a partition is closed on both ends, every later one is open at the low
// end and closed at the high end, so adjacent intervals never overlap.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }

  double width() const { return hi - lo; }
};

// Uniform draw from an interval; openness of the endpoints is intentionally
// ignored (boundary atoms have measure zero). A degenerate interval returns
// its single point.
inline double uniform_in(const Interval& iv, RngStream& rng) {
  return iv.lo + (iv.hi - iv.lo) * rng.next_double();
}

// Contiguous, non-overlapping cover of [lo, hi] by one or more intervals.
class Partition {
 public:
  // single interval covering the whole range
  static Partition whole(double lo, double hi);
  static Partition whole(const ParameterSpec& spec) {
    return whole(spec.min, spec.max);
  }

  // m equally sized intervals
  static Partition equal_intervals(double lo, double hi, int m);

  // interior cut points (strictly between lo and hi, strictly increasing)
  static Partition from_cuts(double lo, double hi, std::vector<double> cuts);

  std::size_t size() const { return ivals_.size(); }
  const Interval& operator[](std::size_t i) const { return ivals_[i]; }

  double lo() const { return ivals_.front().lo; }
  double hi() const { return ivals_.back().hi; }

  // Index of the interval containing x; throws std::domain_error when x lies
  // outside [lo, hi] (NaN included).
  std::size_t index_of(double x) const;

  // interior boundaries, one per adjacent pair
  std::vector<double> cuts() const;

 private:
  std::vector<Interval> ivals_;
  void validate() const;  // adjacency / endpoint-convention check
};

// One observed transition: observables before, the applied parameter values,
// observables after, and the reward received. `action` carries the acting
// agent's own action id where one exists; consumers that track their pending
// action internally may leave it at -1.
struct ExperienceTuple {
  std::vector<double> obs_before;
  int action = -1;
  std::vector<double> values;
  std::vector<double> obs_after;
  double reward = 0.0;
};

// Expected-reward table over a finite action set 0..size()-1.
class QTable {
 public:
  QTable() = default;
  explicit QTable(std::size_t n_actions) : q_(n_actions, 0.0) {}

  std::size_t size() const { return q_.size(); }
  double& operator[](std::size_t a) { return q_[a]; }
  double operator[](std::size_t a) const { return q_[a]; }
  const std::vector<double>& entries() const { return q_; }

  // state value: max over entries (0 for an empty table)
  double value() const;

  // max - min, 0 for fewer than two entries
  double spread() const;

  // argmax with uniform tie-breaking
  std::size_t greedy(RngStream& rng) const;

 private:
  std::vector<double> q_;
};

// With probability eps a uniformly random action, otherwise the greedy one.
std::size_t epsilon_greedy(const QTable& q, double eps, RngStream& rng);

}  // namespace apc
