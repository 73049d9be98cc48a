#include "apc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apc {

namespace {

constexpr double kDenomGuard = 1e-12;

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Population init_population(const EaConfig& cfg, const ProblemInstance& p,
                           RngStream& rng) {
  if (cfg.mu < 1 || cfg.lambda < 1)
    throw std::domain_error("init_population: mu and lambda must be >= 1");
  Population pop;
  pop.members.resize(static_cast<std::size_t>(cfg.mu));
  for (auto& ind : pop.members) {
    ind.x.resize(static_cast<std::size_t>(p.dimension));
    for (int i = 0; i < p.dimension; ++i)
      ind.x[static_cast<std::size_t>(i)] = rng.uniform(p.lower[static_cast<std::size_t>(i)], p.upper[static_cast<std::size_t>(i)]);
    ind.fitness = evaluate(p, ind.x);
  }
  std::stable_sort(pop.members.begin(), pop.members.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.fitness < b.fitness;
                   });
  pop.generation = 0;
  pop.best_fitness = pop.members.front().fitness;
  pop.prev_best_fitness = pop.best_fitness;
  pop.stagnation = 0;
  return pop;
}

double reward_value(double f_t, double f_t1, const EaConfig& cfg) {
  if (cfg.ratio_reward)
    return cfg.c * (f_t1 / std::max(f_t, kDenomGuard) - 1.0);
  return cfg.c * (f_t - f_t1) / std::max(f_t1, kDenomGuard);
}

double step(Population& pop, double sigma, const EaConfig& cfg,
            const ProblemInstance& p, RngStream& rng) {
  if (!(sigma >= 0.0 && sigma <= cfg.k))
    throw std::domain_error("step: sigma outside [0, k]");
  const double f_t = pop.best_fitness;

  std::vector<Individual> pool = pop.members;  // parents first: elitist ties
  pool.reserve(pool.size() + static_cast<std::size_t>(cfg.lambda));
  for (int c = 0; c < cfg.lambda; ++c) {
    const auto parent = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cfg.mu)));
    Individual child;
    child.x = mutate(pop.members[parent].x, sigma, p, rng);
    child.fitness = evaluate(p, child.x);
    pool.push_back(std::move(child));
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.fitness < b.fitness;
                   });
  pool.resize(static_cast<std::size_t>(cfg.mu));
  pop.members = std::move(pool);

  const double f_t1 = pop.members.front().fitness;
  pop.prev_best_fitness = f_t;
  pop.best_fitness = f_t1;
  pop.generation += 1;
  if (f_t1 < f_t)
    pop.stagnation = 0;
  else
    pop.stagnation += 1;
  return reward_value(f_t, f_t1, cfg);
}

ObservableVector observe(const Population& pop, const ProblemInstance& p) {
  ObservableVector o;
  const std::size_t mu = pop.members.size();

  if (mu > 1) {
    double sum = 0.0;
    for (std::size_t i = 0; i < mu; ++i)
      for (std::size_t j = i + 1; j < mu; ++j)
        sum += euclid(pop.members[i].x, pop.members[j].x);
    const double pairs = static_cast<double>(mu) * static_cast<double>(mu - 1) / 2.0;
    o.genotypic_diversity = sum / pairs / p.domain_diagonal();
  }

  double mean = 0.0;
  for (const auto& m : pop.members) mean += m.fitness;
  mean /= static_cast<double>(mu);
  double var = 0.0;
  for (const auto& m : pop.members) {
    const double d = m.fitness - mean;
    var += d * d;
  }
  o.fitness_stddev = std::sqrt(var / static_cast<double>(mu));

  o.stagnation = static_cast<double>(pop.stagnation);
  o.fitness_improvement = (pop.prev_best_fitness - pop.best_fitness) /
                          std::max(std::fabs(pop.prev_best_fitness), kDenomGuard);
  return o;
}

RunRecord run_to_optimum(const EaConfig& cfg, const ProblemInstance& p,
                         Controller& controller, const RngStream& rng,
                         bool keep_traces) {
  RunRecord rec;
  rec.problem = p.name;
  rec.k = cfg.k;
  rec.mu = cfg.mu;
  rec.lambda = cfg.lambda;

  RngStream engine_rng = rng.split(0);
  RngStream ctl_rng = rng.split(1);

  Population pop = init_population(cfg, p, engine_rng);
  rec.evaluations = static_cast<std::uint64_t>(cfg.mu);

  if (pop.best_fitness - p.optimum_value <= p.epsilon) {
    rec.success = true;
    return rec;
  }

  ObservableVector obs = observe(pop, p);
  while (pop.generation < cfg.max_generations) {
    const std::vector<double> v = controller.propose(obs, ctl_rng);
    const double sigma = v.at(0);
    const double reward = step(pop, sigma, cfg, p, engine_rng);
    rec.evaluations += static_cast<std::uint64_t>(cfg.lambda);
    const ObservableVector obs_next = observe(pop, p);

    ExperienceTuple t;
    t.obs_before = obs.flatten();
    t.values = v;
    t.obs_after = obs_next.flatten();
    t.reward = reward;
    controller.feedback(t);

    rec.generations = pop.generation;
    if (keep_traces) {
      rec.sigma_trace.push_back(sigma);
      rec.reward_trace.push_back(reward);
      rec.split_trace.push_back(controller.boundaries());
    }
    obs = obs_next;

    if (pop.best_fitness - p.optimum_value <= p.epsilon) {
      rec.success = true;
      break;
    }
  }
  return rec;
}

}  // namespace apc
