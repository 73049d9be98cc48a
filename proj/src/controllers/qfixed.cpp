#include <utility>

#include "apc/controllers.hpp"
#include "common.hpp"
#include "json.hpp"

namespace apc {
namespace {

// Single-state Q-learning over a fixed equal-interval discretization of each
// parameter range; the joint choice over parameters is one table action.
class QFixedController final : public Controller {
 public:
  QFixedController(std::vector<ParameterSpec> specs, const RlParams& rl,
                   int intervals)
      : specs_(std::move(specs)),
        rl_(rl),
        grid_(specs_, intervals),
        q_(grid_.total) {}

  std::vector<double> propose(const ObservableVector&, RngStream& rng) override {
    pending_ = epsilon_greedy(q_, rl_.epsilon, rng);
    const auto idx = grid_.decode(pending_);
    std::vector<double> values(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i)
      values[i] = uniform_in(grid_.parts[i][idx[i]], rng);
    return values;
  }

  void feedback(const ExperienceTuple& t) override {
    const double lr = rl_.learning_rate(t.reward);
    const double target = t.reward + rl_.gamma * q_.value();
    q_[pending_] += lr * (target - q_[pending_]);
  }

  std::vector<double> boundaries() const override {
    return grid_.parts[0].cuts();
  }

  std::string snapshot() const override {
    nlohmann::ordered_json j;
    j["type"] = "qlearn";
    j["q"] = q_.entries();
    j["cuts"] = grid_.parts[0].cuts();
    return j.dump();
  }

 private:
  std::vector<ParameterSpec> specs_;
  RlParams rl_;
  detail::ActionGrid grid_;
  QTable q_;
  std::size_t pending_ = 0;
};

}  // namespace

namespace detail {
std::unique_ptr<Controller> make_qfixed(std::vector<ParameterSpec> specs,
                                        const RlParams& rl, int intervals) {
  return std::make_unique<QFixedController>(std::move(specs), rl, intervals);
}
}  // namespace detail

}  // namespace apc
