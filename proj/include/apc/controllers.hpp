#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apc/core.hpp"
#include "apc/engine.hpp"
#include "apc/stats.hpp"

namespace apc {

// Shared reinforcement-learning constants. The learning rate depends on the
// sign of the reward: alpha on improvement, the much smaller alpha0 otherwise,
// so long stretches of zero reward only slowly erode what was learned.
struct RlParams {
  double alpha = 0.9;
  double alpha0 = 0.02;
  double gamma = 0.8;
  double epsilon = 0.1;  // exploration rate

  double learning_rate(double reward) const {
    return reward > 0.0 ? alpha : alpha0;
  }
};

// Options of the entropy-based range-split controller ("earpc").
struct EarpcOptions {
  std::size_t min_tuples = 10;   // below this the proposal is uniform
  std::size_t buffer_cap = 1000;  // FIFO bound on the experience buffer
  bool cluster_on_reward = false;  // cluster feature: values (default) or reward
  EntropyWeighting weighting = EntropyWeighting::cluster_size;
};

// Options of the observation-space tree controllers ("qtree", "earpc-tree").
struct TreeOptions {
  std::size_t leaf_cap = 1000;  // FIFO bound per leaf buffer
  int intervals = 5;            // fixed per-parameter discretization (qtree)
  std::size_t min_side = 2;     // minimum samples on each side of a split
  double significance = 0.05;   // KS p-value threshold for splitting
};

// Options of the adaptive action-set controller ("adaptive").
struct AdaptiveOptions {
  std::size_t min_buffer = 100;  // tuples required before (re)discretization
  std::size_t buffer_cap = 1000;
  int depth_limit = 2;           // at most 2^depth_limit intervals
  double delta_coeff = 0.01;     // delta = coeff * max(1, max Q)
  std::size_t retry_stride = 25;  // extra tuples required after a failed attempt
  double significance = 0.05;
  std::size_t min_side = 2;
};

// ---------------------------------------------------------------------------
// Entropy-based range splitting (shared by "earpc" and "earpc-tree")
// ---------------------------------------------------------------------------

// Per-parameter outcome of one analysis pass: the entropy-minimal split point
// and the mean rewards on [min, split] and (split, max].
struct EarpcSplit {
  double split = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

// Clusters the buffered tuples once (on parameter values, or on reward when
// configured) and finds the entropy-minimal split per parameter. Entries are
// nullopt where no split exists; the whole result is nullopt when the buffer
// is smaller than min_tuples or clustering is degenerate.
std::optional<std::vector<std::optional<EarpcSplit>>> earpc_analyze(
    std::span<const ExperienceTuple> buffer,
    std::span<const ParameterSpec> specs, const EarpcOptions& opt,
    RngStream& rng);

struct EarpcProposal {
  std::vector<double> values;
  std::vector<std::vector<double>> boundaries;  // per parameter: {split} or {}
};

// One proposal: per parameter, choose the side of the split with probability
// proportional to its mean reward (uniform coin when both are zero) and draw
// uniformly inside it; parameters without a split draw uniformly from the
// whole range, as does everything during the cold start.
EarpcProposal earpc_propose(std::span<const ExperienceTuple> buffer,
                            std::span<const ParameterSpec> specs,
                            const EarpcOptions& opt, RngStream& rng);

// State value of a buffered leaf: mean over parameters of
// (q1^2 + q2^2) / (q1 + q2); mean reward where no split exists yet; 0 for an
// empty buffer.
double earpc_state_value(std::span<const ExperienceTuple> buffer,
                         std::span<const ParameterSpec> specs,
                         const EarpcOptions& opt, RngStream& rng);

// ---------------------------------------------------------------------------
// Recursive KS discretization (used by "adaptive")
// ---------------------------------------------------------------------------

// Recursively splits [spec.min, spec.max] at the most significant KS split of
// reward conditioned on value, to at most 2^depth_limit intervals. nullopt
// when not even the root split is significant.
std::optional<Partition> split_of_range(
    std::span<const std::pair<double, double>> samples,  // (value, reward)
    const ParameterSpec& spec, int depth_limit, double significance = 0.05,
    std::size_t min_side = 2);

// ---------------------------------------------------------------------------
// Observation-space tree (shared by "qtree" and "earpc-tree")
// ---------------------------------------------------------------------------

// Binary decision tree over the observable vector. Internal nodes test
// obs[obs_index] <= split_value; leaves carry the learning payload.
struct StateNode {
  int obs_index = -1;
  double split_value = 0.0;
  std::unique_ptr<StateNode> left, right;

  QTable q;        // per-leaf action values ("qtree" only)
  double value = 0.0;  // cached max-Q ("qtree" only)
  std::vector<ExperienceTuple> buffer;

  bool is_leaf() const { return !left; }
  StateNode* route(std::span<const double> obs);
  const StateNode* route(std::span<const double> obs) const;
  std::size_t leaf_count() const;
};

// ---------------------------------------------------------------------------
// Controller factory
// ---------------------------------------------------------------------------

// Canonical names (with accepted aliases):
//   adaptive (A)     - per-parameter Q-learning over a self-discretized range
//   qlearn (Q)       - single-state Q-learning over fixed equal intervals
//   qtree (K)        - Q-learning with a KS-grown observation tree
//   earpc (E)        - entropy-based range split, reward-proportional choice
//   earpc-tree (E+K) - earpc inside the leaves of a KS-grown observation tree
std::vector<std::string> controller_names();
std::string canonical_controller_name(const std::string& name);  // throws
std::string short_controller_name(const std::string& canonical);

// internal_rng feeds randomness consumed outside propose() (the clustering
// inside earpc-tree's feedback processing); derive it per run for independence.
std::unique_ptr<Controller> make_controller(
    const std::string& name, std::vector<ParameterSpec> specs,
    const RlParams& rl = {}, const EarpcOptions& earpc = {},
    const TreeOptions& tree = {}, const AdaptiveOptions& adaptive = {},
    RngStream internal_rng = RngStream(0, 0));

}  // namespace apc
