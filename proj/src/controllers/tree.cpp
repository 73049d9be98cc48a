#include <unordered_map>
#include <utility>

#include "apc/controllers.hpp"
#include "common.hpp"
#include "json.hpp"

namespace apc {

StateNode* StateNode::route(std::span<const double> obs) {
  StateNode* n = this;
  while (!n->is_leaf())
    n = obs[static_cast<std::size_t>(n->obs_index)] <= n->split_value
            ? n->left.get()
            : n->right.get();
  return n;
}

const StateNode* StateNode::route(std::span<const double> obs) const {
  return const_cast<StateNode*>(this)->route(obs);
}

std::size_t StateNode::leaf_count() const {
  if (is_leaf()) return 1;
  return left->leaf_count() + right->leaf_count();
}

namespace {

struct TreeSplit {
  int obs = -1;
  double split = 0.0;
  double p = 1.0;
};

// most significant KS split of q over any observable of the buffered tuples
std::optional<TreeSplit> find_tree_split(
    const std::vector<ExperienceTuple>& tuples,
    const std::vector<double>& qvals, const TreeOptions& opt) {
  std::optional<TreeSplit> best;
  for (int o = 0; o < ObservableVector::dim; ++o) {
    std::vector<std::pair<double, double>> pts(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i)
      pts[i] = {tuples[i].obs_before[static_cast<std::size_t>(o)], qvals[i]};
    const auto ks = best_ks_key_split(std::move(pts), opt.min_side);
    if (ks && (!best || ks->p_value < best->p))
      best = TreeSplit{o, ks->split_value, ks->p_value};
  }
  return best;
}

// Turns a leaf into an internal node; the buffer is divided between the
// children, the action table (when present) is copied to both.
void split_node(StateNode& n, int obs, double split, bool copy_q) {
  n.left = std::make_unique<StateNode>();
  n.right = std::make_unique<StateNode>();
  if (copy_q) {
    n.left->q = n.q;
    n.left->value = n.value;
    n.right->q = n.q;
    n.right->value = n.value;
  }
  for (auto& t : n.buffer) {
    StateNode& child =
        t.obs_before[static_cast<std::size_t>(obs)] <= split ? *n.left : *n.right;
    child.buffer.push_back(std::move(t));
  }
  n.buffer.clear();
  n.buffer.shrink_to_fit();
  n.q = QTable();
  n.value = 0.0;
  n.obs_index = obs;
  n.split_value = split;
}

void node_to_json(const StateNode& n, nlohmann::ordered_json& j) {
  if (n.is_leaf()) {
    j["leaf"] = true;
    j["buffer"] = n.buffer.size();
    if (n.q.size() > 0) {
      j["q"] = n.q.entries();
      j["value"] = n.value;
    }
    return;
  }
  j["obs_index"] = n.obs_index;
  j["split_value"] = n.split_value;
  node_to_json(*n.left, j["left"]);
  node_to_json(*n.right, j["right"]);
}

// Q-learning whose state space is a KS-grown tree over the observables; the
// action set is a fixed equal-interval discretization per parameter.
class TreeQController final : public Controller {
 public:
  TreeQController(std::vector<ParameterSpec> specs, const RlParams& rl,
                  const TreeOptions& opt)
      : specs_(std::move(specs)),
        rl_(rl),
        opt_(opt),
        grid_(specs_, opt.intervals),
        root_(std::make_unique<StateNode>()) {
    root_->q = QTable(grid_.total);
  }

  std::vector<double> propose(const ObservableVector& obs,
                              RngStream& rng) override {
    const std::vector<double> flat = obs.flatten();
    StateNode* leaf = root_->route(flat);
    pending_ = epsilon_greedy(leaf->q, rl_.epsilon, rng);
    const auto idx = grid_.decode(pending_);
    std::vector<double> values(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i)
      values[i] = uniform_in(grid_.parts[i][idx[i]], rng);
    return values;
  }

  void feedback(const ExperienceTuple& t) override {
    StateNode* s = root_->route(t.obs_before);
    StateNode* s_next = root_->route(t.obs_after);

    ExperienceTuple stored = t;
    stored.action = static_cast<int>(pending_);
    detail::push_capped(s->buffer, std::move(stored), opt_.leaf_cap);

    const double lr = rl_.learning_rate(t.reward);
    const double target = t.reward + rl_.gamma * s_next->value;
    s->q[pending_] += lr * (target - s->q[pending_]);
    s->value = s->q.value();

    process(s);
  }

  std::vector<double> boundaries() const override {
    return grid_.parts[0].cuts();
  }

  std::string snapshot() const override {
    nlohmann::ordered_json j;
    j["type"] = "qtree";
    j["leaves"] = root_->leaf_count();
    j["cuts"] = grid_.parts[0].cuts();
    node_to_json(*root_, j["tree"]);
    return j.dump();
  }

  const StateNode& root() const { return *root_; }

 private:
  void process(StateNode* s) {
    if (s->buffer.size() < 2 * opt_.min_side) return;
    std::vector<double> qvals(s->buffer.size());
    for (std::size_t i = 0; i < s->buffer.size(); ++i) {
      const StateNode* target = root_->route(s->buffer[i].obs_after);
      qvals[i] = s->buffer[i].reward + rl_.gamma * target->value;
    }
    const auto best = find_tree_split(s->buffer, qvals, opt_);
    if (best && best->p < opt_.significance)
      split_node(*s, best->obs, best->split, true);
  }

  std::vector<ParameterSpec> specs_;
  RlParams rl_;
  TreeOptions opt_;
  detail::ActionGrid grid_;
  std::unique_ptr<StateNode> root_;
  std::size_t pending_ = 0;
};

// Entropy-based range splitting applied inside the leaves of a KS-grown
// observation tree. Leaves store experience only; the value of a leaf is
// derived from its buffer on demand.
class TreeEarpcController final : public Controller {
 public:
  TreeEarpcController(std::vector<ParameterSpec> specs, const RlParams& rl,
                      const TreeOptions& opt, const EarpcOptions& eopt,
                      RngStream internal_rng)
      : specs_(std::move(specs)),
        rl_(rl),
        opt_(opt),
        eopt_(eopt),
        internal_rng_(internal_rng),
        root_(std::make_unique<StateNode>()) {}

  std::vector<double> propose(const ObservableVector& obs,
                              RngStream& rng) override {
    StateNode* leaf = root_->route(obs.flatten());
    EarpcProposal p = earpc_propose(leaf->buffer, specs_, eopt_, rng);
    last_bounds_ = std::move(p.boundaries);
    return std::move(p.values);
  }

  void feedback(const ExperienceTuple& t) override {
    StateNode* s = root_->route(t.obs_before);
    detail::push_capped(s->buffer, t, opt_.leaf_cap);
    process(s);
  }

  std::vector<double> boundaries() const override {
    return last_bounds_.empty() ? std::vector<double>{} : last_bounds_[0];
  }

  std::string snapshot() const override {
    nlohmann::ordered_json j;
    j["type"] = "earpc-tree";
    j["leaves"] = root_->leaf_count();
    node_to_json(*root_, j["tree"]);
    return j.dump();
  }

 private:
  void process(StateNode* s) {
    if (s->buffer.size() < 2 * opt_.min_side) return;
    // leaf values are stable within one pass: compute each target leaf once
    std::unordered_map<const StateNode*, double> value_of;
    std::vector<double> qvals(s->buffer.size());
    for (std::size_t i = 0; i < s->buffer.size(); ++i) {
      const StateNode* target = root_->route(s->buffer[i].obs_after);
      auto it = value_of.find(target);
      if (it == value_of.end()) {
        const double v =
            earpc_state_value(target->buffer, specs_, eopt_, internal_rng_);
        it = value_of.emplace(target, v).first;
      }
      qvals[i] = s->buffer[i].reward + rl_.gamma * it->second;
    }
    const auto best = find_tree_split(s->buffer, qvals, opt_);
    if (best && best->p < opt_.significance)
      split_node(*s, best->obs, best->split, false);
  }

  std::vector<ParameterSpec> specs_;
  RlParams rl_;
  TreeOptions opt_;
  EarpcOptions eopt_;
  RngStream internal_rng_;
  std::unique_ptr<StateNode> root_;
  std::vector<std::vector<double>> last_bounds_;
};

}  // namespace

namespace detail {
std::unique_ptr<Controller> make_qtree(std::vector<ParameterSpec> specs,
                                       const RlParams& rl,
                                       const TreeOptions& opt) {
  return std::make_unique<TreeQController>(std::move(specs), rl, opt);
}
std::unique_ptr<Controller> make_earpc_tree(std::vector<ParameterSpec> specs,
                                            const RlParams& rl,
                                            const TreeOptions& opt,
                                            const EarpcOptions& eopt,
                                            RngStream internal_rng) {
  return std::make_unique<TreeEarpcController>(std::move(specs), rl, opt, eopt,
                                               internal_rng);
}
}  // namespace detail

}  // namespace apc
