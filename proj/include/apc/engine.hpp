#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apc/core.hpp"
#include "apc/problems.hpp"

namespace apc {

// (mu + lambda) evolution strategy configuration. `k` is the upper bound of
// the controlled mutation-strength range [0, k]; `c` scales the reward.
struct EaConfig {
  int mu = 1;
  int lambda = 1;
  double k = 1.0;
  double c = 100.0;
  int max_generations = 100000;

  // default reward: c * (f_t - f_{t+1}) / f_{t+1}  (>= 0 under elitism);
  // the alternative is the raw ratio form c * (f_{t+1}/f_t - 1)
  bool ratio_reward = false;
};

struct Individual {
  std::vector<double> x;
  double fitness = 0.0;
};

struct Population {
  std::vector<Individual> members;  // size mu, best first
  int generation = 0;
  double best_fitness = 0.0;
  double prev_best_fitness = 0.0;  // best of the previous generation
  int stagnation = 0;              // consecutive generations without improvement
};

// Observables describing the optimization state, in this fixed order when
// flattened: genotypic diversity, fitness stddev, stagnation, improvement.
struct ObservableVector {
  double genotypic_diversity = 0.0;  // mean pairwise distance / domain diagonal
  double fitness_stddev = 0.0;
  double stagnation = 0.0;
  double fitness_improvement = 0.0;  // (f_prev - f_best) / max(|f_prev|, 1e-12)

  static constexpr int dim = 4;
  std::vector<double> flatten() const {
    return {genotypic_diversity, fitness_stddev, stagnation, fitness_improvement};
  }
};

// Online controller of the mutation strength (or, in general, of one value
// per configured parameter). propose() and feedback() alternate strictly: the
// engine feeds back exactly the transition produced by the last proposal.
class Controller {
 public:
  virtual ~Controller() = default;

  // one value per parameter, each inside its spec range
  virtual std::vector<double> propose(const ObservableVector& obs,
                                      RngStream& rng) = 0;

  virtual void feedback(const ExperienceTuple& t) = 0;

  // interior boundaries of the first parameter's current discretization, for
  // split traces; empty when no split has been chosen yet
  virtual std::vector<double> boundaries() const = 0;

  // diagnostic state dump (JSON text)
  virtual std::string snapshot() const = 0;
};

Population init_population(const EaConfig& cfg, const ProblemInstance& p,
                           RngStream& rng);

// One (mu + lambda) generation with mutation strength sigma; returns the
// reward. Selection is elitist: best_fitness never increases.
double step(Population& pop, double sigma, const EaConfig& cfg,
            const ProblemInstance& p, RngStream& rng);

ObservableVector observe(const Population& pop, const ProblemInstance& p);

// reward for a best-fitness transition f_t -> f_t1
double reward_value(double f_t, double f_t1, const EaConfig& cfg);

// Full run trace and outcome.
struct RunRecord {
  std::string controller, problem;
  double k = 1.0;
  int mu = 1, lambda = 1;
  std::uint64_t seed = 0;  // stream id of the run

  int generations = 0;
  bool success = false;
  std::uint64_t evaluations = 0;

  std::vector<double> sigma_trace;   // one entry per generation
  std::vector<double> reward_trace;  // one entry per generation
  std::vector<std::vector<double>> split_trace;  // boundaries per generation
};

// Runs until best - optimum <= epsilon or the generation budget is spent.
// The provided stream is split internally: child 0 drives the engine, child 1
// the controller, so controller draws never perturb the engine sequence.
RunRecord run_to_optimum(const EaConfig& cfg, const ProblemInstance& p,
                         Controller& controller, const RngStream& rng,
                         bool keep_traces = true);

}  // namespace apc
