#include <algorithm>
#include <utility>

#include "apc/controllers.hpp"
#include "common.hpp"
#include "json.hpp"

namespace apc {

std::optional<std::vector<std::optional<EarpcSplit>>> earpc_analyze(
    std::span<const ExperienceTuple> buffer,
    std::span<const ParameterSpec> specs, const EarpcOptions& opt,
    RngStream& rng) {
  if (buffer.size() < std::max<std::size_t>(opt.min_tuples, 2))
    return std::nullopt;

  std::vector<std::vector<double>> pts;
  pts.reserve(buffer.size());
  for (const auto& t : buffer)
    pts.push_back(opt.cluster_on_reward ? std::vector<double>{t.reward}
                                        : t.values);
  const Kmeans2Result km = kmeans2(pts, rng);
  if (km.degenerate) return std::nullopt;

  std::vector<std::optional<EarpcSplit>> out(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::vector<std::pair<double, int>> labeled(buffer.size());
    for (std::size_t t = 0; t < buffer.size(); ++t)
      labeled[t] = {buffer[t].values[i], km.labels[t]};
    const auto cand = best_entropy_split(labeled, opt.weighting);
    if (!cand) continue;

    double sum1 = 0.0, sum2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    for (const auto& t : buffer) {
      if (t.values[i] <= cand->split_value) {
        sum1 += t.reward;
        ++n1;
      } else {
        sum2 += t.reward;
        ++n2;
      }
    }
    // negative means are clamped: side quality is a selection weight
    const double q1 = n1 ? std::max(0.0, sum1 / static_cast<double>(n1)) : 0.0;
    const double q2 = n2 ? std::max(0.0, sum2 / static_cast<double>(n2)) : 0.0;
    out[i] = EarpcSplit{cand->split_value, q1, q2};
  }
  return out;
}

EarpcProposal earpc_propose(std::span<const ExperienceTuple> buffer,
                            std::span<const ParameterSpec> specs,
                            const EarpcOptions& opt, RngStream& rng) {
  EarpcProposal prop;
  prop.values.resize(specs.size());
  prop.boundaries.resize(specs.size());

  const auto analysis = earpc_analyze(buffer, specs, opt, rng);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ParameterSpec& s = specs[i];
    if (!analysis || !(*analysis)[i]) {
      prop.values[i] = rng.uniform(s.min, s.max);
      continue;
    }
    const EarpcSplit& es = *(*analysis)[i];
    prop.boundaries[i] = {es.split};
    const double qs = es.q1 + es.q2;
    const double p1 = qs > 0.0 ? es.q1 / qs : 0.5;
    if (rng.next_double() < p1)
      prop.values[i] = rng.uniform(s.min, es.split);
    else
      prop.values[i] = rng.uniform(es.split, s.max);
  }
  return prop;
}

double earpc_state_value(std::span<const ExperienceTuple> buffer,
                         std::span<const ParameterSpec> specs,
                         const EarpcOptions& opt, RngStream& rng) {
  if (buffer.empty() || specs.empty()) return 0.0;
  double mean_r = 0.0;
  for (const auto& t : buffer) mean_r += t.reward;
  mean_r /= static_cast<double>(buffer.size());

  const auto analysis = earpc_analyze(buffer, specs, opt, rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!analysis || !(*analysis)[i]) {
      acc += mean_r;
      continue;
    }
    const EarpcSplit& es = *(*analysis)[i];
    const double qs = es.q1 + es.q2;
    acc += qs > 0.0 ? (es.q1 * es.q1 + es.q2 * es.q2) / qs : 0.0;
  }
  return acc / static_cast<double>(specs.size());
}

namespace {

class EarpcController final : public Controller {
 public:
  EarpcController(std::vector<ParameterSpec> specs, EarpcOptions opt)
      : specs_(std::move(specs)), opt_(opt) {}

  std::vector<double> propose(const ObservableVector&, RngStream& rng) override {
    EarpcProposal p = earpc_propose(buffer_, specs_, opt_, rng);
    last_bounds_ = std::move(p.boundaries);
    return std::move(p.values);
  }

  void feedback(const ExperienceTuple& t) override {
    detail::push_capped(buffer_, t, opt_.buffer_cap);
  }

  std::vector<double> boundaries() const override {
    return last_bounds_.empty() ? std::vector<double>{} : last_bounds_[0];
  }

  std::string snapshot() const override {
    nlohmann::ordered_json j;
    j["type"] = "earpc";
    j["buffer"] = buffer_.size();
    j["last_split"] = last_bounds_;
    return j.dump();
  }

 private:
  std::vector<ParameterSpec> specs_;
  EarpcOptions opt_;
  std::vector<ExperienceTuple> buffer_;
  std::vector<std::vector<double>> last_bounds_;
};

}  // namespace

namespace detail {
std::unique_ptr<Controller> make_earpc(std::vector<ParameterSpec> specs,
                                       const EarpcOptions& opt) {
  return std::make_unique<EarpcController>(std::move(specs), opt);
}
}  // namespace detail

}  // namespace apc
