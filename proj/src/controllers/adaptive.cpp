#include <algorithm>
#include <utility>

#include "apc/controllers.hpp"
#include "common.hpp"
#include "json.hpp"

namespace apc {

namespace {

// samples sorted by value; returns interior cut points in increasing order
std::vector<double> split_rec(std::span<const std::pair<double, double>> s,
                              int depth, double significance,
                              std::size_t min_side) {
  if (depth <= 0 || s.size() < 2 * min_side) return {};
  const auto best = best_ks_key_split(
      std::vector<std::pair<double, double>>(s.begin(), s.end()), min_side);
  if (!best || !(best->p_value < significance)) return {};

  const auto mid = std::upper_bound(
      s.begin(), s.end(), best->split_value,
      [](double v, const std::pair<double, double>& e) { return v < e.first; });
  const auto nl = static_cast<std::size_t>(mid - s.begin());

  std::vector<double> cuts =
      split_rec(s.first(nl), depth - 1, significance, min_side);
  cuts.push_back(best->split_value);
  const std::vector<double> right =
      split_rec(s.subspan(nl), depth - 1, significance, min_side);
  cuts.insert(cuts.end(), right.begin(), right.end());
  return cuts;
}

}  // namespace

std::optional<Partition> split_of_range(
    std::span<const std::pair<double, double>> samples,
    const ParameterSpec& spec, int depth_limit, double significance,
    std::size_t min_side) {
  std::vector<std::pair<double, double>> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::vector<double> cuts =
      split_rec(sorted, depth_limit, significance, min_side);
  if (cuts.empty()) return std::nullopt;
  return Partition::from_cuts(spec.min, spec.max, cuts);
}

namespace {

// One Q-learning agent per parameter. Each starts from the whole range as a
// single action, discretizes it once enough experience is buffered, and
// re-discretizes whenever its Q-values have drifted delta-close together.
class AdaptiveController final : public Controller {
 public:
  AdaptiveController(std::vector<ParameterSpec> specs, const RlParams& rl,
                     const AdaptiveOptions& opt)
      : rl_(rl), opt_(opt) {
    for (auto& s : specs) {
      Agent a{s, Partition::whole(s), QTable(1), {}, 0, 0};
      agents_.push_back(std::move(a));
    }
    pending_.assign(agents_.size(), 0);
  }

  std::vector<double> propose(const ObservableVector&, RngStream& rng) override {
    std::vector<double> values(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      Agent& ag = agents_[i];
      maybe_rediscretize(ag);
      const std::size_t a = epsilon_greedy(ag.q, rl_.epsilon, rng);
      pending_[i] = a;
      values[i] = uniform_in(ag.part[a], rng);
    }
    return values;
  }

  void feedback(const ExperienceTuple& t) override {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      Agent& ag = agents_[i];
      if (opt_.buffer_cap > 0 && ag.buffer.size() >= opt_.buffer_cap)
        ag.buffer.erase(ag.buffer.begin());
      ag.buffer.emplace_back(t.values[i], t.reward);
      if (ag.cooldown > 0) --ag.cooldown;

      const double lr = rl_.learning_rate(t.reward);
      const double target = t.reward + rl_.gamma * ag.q.value();
      ag.q[pending_[i]] += lr * (target - ag.q[pending_[i]]);
    }
  }

  std::vector<double> boundaries() const override {
    return agents_.empty() ? std::vector<double>{} : agents_[0].part.cuts();
  }

  std::string snapshot() const override {
    nlohmann::ordered_json j;
    j["type"] = "adaptive";
    auto& arr = j["agents"] = nlohmann::ordered_json::array();
    for (const auto& ag : agents_) {
      nlohmann::ordered_json a;
      a["name"] = ag.spec.name;
      a["cuts"] = ag.part.cuts();
      a["q"] = ag.q.entries();
      a["buffer"] = ag.buffer.size();
      a["rediscretizations"] = ag.rediscretizations;
      arr.push_back(std::move(a));
    }
    return j.dump();
  }

 private:
  struct Agent {
    ParameterSpec spec;
    Partition part;
    QTable q;
    std::vector<std::pair<double, double>> buffer;  // (value, reward)
    int cooldown = 0;  // feedbacks to wait after a failed split attempt
    int rediscretizations = 0;
  };

  double delta(const Agent& ag) const {
    return opt_.delta_coeff * std::max(1.0, ag.q.value());
  }

  void maybe_rediscretize(Agent& ag) {
    const bool armed =
        ag.part.size() == 1 || ag.q.spread() < delta(ag);
    if (!armed) return;
    if (ag.buffer.size() < opt_.min_buffer || ag.cooldown > 0) return;
    const auto np = split_of_range(ag.buffer, ag.spec, opt_.depth_limit,
                                   opt_.significance, opt_.min_side);
    if (np) {
      ag.part = *np;
      ag.q = QTable(ag.part.size());
      ag.buffer.clear();
      ag.cooldown = 0;
      ++ag.rediscretizations;
    } else {
      ag.cooldown = static_cast<int>(opt_.retry_stride);
    }
  }

  RlParams rl_;
  AdaptiveOptions opt_;
  std::vector<Agent> agents_;
  std::vector<std::size_t> pending_;
};

}  // namespace

namespace detail {
std::unique_ptr<Controller> make_adaptive(std::vector<ParameterSpec> specs,
                                          const RlParams& rl,
                                          const AdaptiveOptions& opt) {
  return std::make_unique<AdaptiveController>(std::move(specs), rl, opt);
}
}  // namespace detail

}  // namespace apc
