#include "apc/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace apc {

namespace {

thread_local std::uint64_t g_eval_calls = 0;

constexpr double kPi = 3.141592653589793238462643383279502884;

// sin(pi * t), exactly 0.0 at integer t. The naive std::sin(pi * t) leaves a
// ~1e-16 residue at integers that squares into the objective and keeps the
// known optimizers from evaluating to an exact 0.
double sin_pi(double t) {
  double r = std::fmod(t, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r > 1.0) r -= 2.0;  // (-1, 1)
  return std::sin(kPi * r);
}

double sqr(double v) { return v * v; }

}  // namespace

double ProblemInstance::domain_diagonal() const {
  double s = 0.0;
  for (int i = 0; i < dimension; ++i) s += sqr(upper[i] - lower[i]);
  return std::sqrt(s);
}

ProblemInstance ProblemInstance::make(std::string_view name, int n) {
  if (n < 1) throw std::domain_error("problem: dimension must be >= 1");
  ProblemInstance p;
  p.name = std::string(name);
  if (name == "sphere") {
    p.kind = ProblemKind::sphere;
    p.dimension = n;
    p.lower.assign(n, -5.0);
    p.upper.assign(n, 5.0);
  } else if (name == "rosenbrock") {
    if (n != 2) throw std::domain_error("rosenbrock: two-dimensional only");
    p.kind = ProblemKind::rosenbrock;
    p.dimension = 2;
    p.lower.assign(2, -5.0);
    p.upper.assign(2, 10.0);
  } else if (name == "levi") {
    if (n != 2) throw std::domain_error("levi: two-dimensional only");
    p.kind = ProblemKind::levi;
    p.dimension = 2;
    p.lower.assign(2, -10.0);
    p.upper.assign(2, 10.0);
  } else if (name == "rastrigin") {
    p.kind = ProblemKind::rastrigin;
    p.dimension = n;
    p.lower.assign(n, -5.0);
    p.upper.assign(n, 5.0);
  } else {
    throw std::domain_error("unknown problem: " + std::string(name));
  }
  return p;
}

double evaluate(const ProblemInstance& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.dimension)
    throw std::domain_error("evaluate: dimension mismatch");
  ++g_eval_calls;
  switch (p.kind) {
    case ProblemKind::sphere: {
      double s = 0.0;
      for (double v : x) s += sqr(v);
      return s;
    }
    case ProblemKind::rosenbrock: {
      const double first = p.rosenbrock_canonical ? (p.rosenbrock_a - x[0])
                                                  : (p.rosenbrock_a - sqr(x[0]));
      return sqr(first) + p.rosenbrock_b * sqr(x[1] - sqr(x[0]));
    }
    case ProblemKind::levi: {
      const double s3x = sin_pi(3.0 * x[0]);
      const double s3y = sin_pi(3.0 * x[1]);
      const double s2y = sin_pi(2.0 * x[1]);
      return sqr(s3x) + sqr(x[0] - 1.0) * (1.0 + sqr(s3y)) +
             sqr(x[1] - 1.0) * (1.0 + sqr(s2y));
    }
    case ProblemKind::rastrigin: {
      const double a = p.rastrigin_amplitude;
      double s = a * p.dimension;
      for (double v : x) s += sqr(v) - a * std::cos(2.0 * kPi * v);
      return s;
    }
  }
  throw std::logic_error("evaluate: unhandled problem kind");
}

std::vector<double> mutate(const std::vector<double>& x, double sigma,
                           const ProblemInstance& p, RngStream& rng) {
  if (static_cast<int>(x.size()) != p.dimension)
    throw std::domain_error("mutate: dimension mismatch");
  if (!(sigma >= 0.0)) throw std::domain_error("mutate: sigma must be >= 0");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] + sigma * rng.normal();
    if (v > p.upper[i])
      out[i] = p.upper[i];
    else if (v < p.lower[i])
      out[i] = p.lower[i];
    else
      out[i] = v;
  }
  return out;
}

std::uint64_t evaluate_call_count() { return g_eval_calls; }
void reset_evaluate_call_count() { g_eval_calls = 0; }

}  // namespace apc
