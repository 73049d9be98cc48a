#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "apc/rng.hpp"

namespace apc {

enum class ProblemKind { sphere, rosenbrock, levi, rastrigin };

// A box-constrained minimization problem with known optimum. `epsilon` is the
// precision at which a run counts as converged: best - optimum_value <= epsilon.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::sphere;
  std::string name = "sphere";
  int dimension = 2;
  std::vector<double> lower, upper;
  double epsilon = 1e-5;
  double optimum_value = 0.0;

  // rosenbrock constants; `rosenbrock_canonical` switches the first term from
  // (a - x1^2)^2 (default) to the textbook (a - x1)^2 — both are 0 at (1, 1)
  double rosenbrock_a = 1.0;
  double rosenbrock_b = 100.0;
  bool rosenbrock_canonical = false;

  double rastrigin_amplitude = 10.0;

  // Euclidean length of the domain box diagonal
  double domain_diagonal() const;

  // name in {sphere, rosenbrock, levi, rastrigin}; rosenbrock and levi are
  // two-dimensional only. Default domains: sphere/rastrigin [-5,5]^n,
  // rosenbrock [-5,10]^2, levi [-10,10]^2.
  static ProblemInstance make(std::string_view name, int n = 2);
};

// Fitness at x; throws std::domain_error on dimension mismatch.
double evaluate(const ProblemInstance& p, const std::vector<double>& x);

// Per-coordinate Gaussian step x_i + sigma * N(0,1), clamped to the domain
// box. sigma must be >= 0.
std::vector<double> mutate(const std::vector<double>& x, double sigma,
                           const ProblemInstance& p, RngStream& rng);

// instrumentation: running count of evaluate() calls on this thread
std::uint64_t evaluate_call_count();
void reset_evaluate_call_count();

}  // namespace apc
