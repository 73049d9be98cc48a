#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "apc/controllers.hpp"
#include "json.hpp"

using namespace apc;
using nlohmann::json;

namespace {

std::vector<ParameterSpec> sigma_spec(double k) { return {{"sigma", 0.0, k}}; }

ObservableVector obs_at(double diversity) {
  ObservableVector o;
  o.genotypic_diversity = diversity;
  return o;
}

ExperienceTuple tuple_of(double value, double reward, double obs0_before = 0.0,
                         double obs0_after = 0.0) {
  ExperienceTuple t;
  t.obs_before = {obs0_before, 0.0, 0.0, 0.0};
  t.values = {value};
  t.obs_after = {obs0_after, 0.0, 0.0, 0.0};
  t.reward = reward;
  return t;
}

// the reference two-cluster buffer: low values rewarded, high values not
std::vector<ExperienceTuple> two_sided_buffer(double low_reward,
                                              double high_reward) {
  std::vector<ExperienceTuple> buf;
  for (int i = 0; i < 3; ++i) {
    buf.push_back(tuple_of(0.1, low_reward));
    buf.push_back(tuple_of(0.2, low_reward));
    buf.push_back(tuple_of(0.8, high_reward));
    buf.push_back(tuple_of(0.9, high_reward));
  }
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// earpc analysis and proposal
// ---------------------------------------------------------------------------

TEST_CASE("earpc_analyze: below min_tuples yields nothing") {
  RngStream rng(30, 1);
  std::vector<ExperienceTuple> buf;
  for (int i = 0; i < 9; ++i) buf.push_back(tuple_of(0.1 * i, 1.0));
  const auto specs = sigma_spec(1.0);
  EarpcOptions opt;  // min_tuples = 10
  CHECK_FALSE(earpc_analyze(buf, specs, opt, rng).has_value());
  buf.push_back(tuple_of(0.95, 1.0));
  CHECK(earpc_analyze(buf, specs, opt, rng).has_value());
}

TEST_CASE("earpc_analyze: clean fixture gives split 0.5 with q1=10, q2=0") {
  RngStream rng(31, 1);
  const auto buf = two_sided_buffer(10.0, 0.0);
  const auto specs = sigma_spec(1.0);
  const auto analysis = earpc_analyze(buf, specs, EarpcOptions{}, rng);
  REQUIRE(analysis.has_value());
  REQUIRE(analysis->size() == 1);
  REQUIRE((*analysis)[0].has_value());
  const auto& s = *(*analysis)[0];
  CHECK(s.split == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.q1 == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(s.q2 == 0.0);
}

TEST_CASE("earpc_analyze: negative side means are clamped to zero") {
  RngStream rng(32, 1);
  const auto buf = two_sided_buffer(5.0, -3.0);
  const auto specs = sigma_spec(1.0);
  const auto analysis = earpc_analyze(buf, specs, EarpcOptions{}, rng);
  REQUIRE(analysis.has_value());
  REQUIRE((*analysis)[0].has_value());
  CHECK((*analysis)[0]->q1 == doctest::Approx(5.0));
  CHECK((*analysis)[0]->q2 == 0.0);
}

TEST_CASE("earpc_analyze: identical values are degenerate, no split") {
  RngStream rng(33, 1);
  std::vector<ExperienceTuple> buf;
  for (int i = 0; i < 12; ++i) buf.push_back(tuple_of(0.5, 1.0 * i));
  CHECK_FALSE(earpc_analyze(buf, sigma_spec(1.0), EarpcOptions{}, rng).has_value());
}

TEST_CASE("earpc_propose: all mass on the rewarded side") {
  RngStream rng(34, 1);
  const auto buf = two_sided_buffer(10.0, 0.0);
  const auto specs = sigma_spec(1.0);
  for (int i = 0; i < 100; ++i) {
    const auto p = earpc_propose(buf, specs, EarpcOptions{}, rng);
    REQUIRE(p.values.size() == 1);
    CHECK(p.values[0] >= 0.0);
    CHECK(p.values[0] <= 0.5);
    REQUIRE(p.boundaries[0].size() == 1);
    CHECK(p.boundaries[0][0] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("earpc_propose: side choice is proportional to mean reward") {
  RngStream rng(35, 1);
  const auto buf = two_sided_buffer(10.0, 5.0);  // p(low side) = 10/15
  const auto specs = sigma_spec(1.0);
  int low = 0;
  const int n = 3000;
  for (int i = 0; i < n; ++i)
    low += earpc_propose(buf, specs, EarpcOptions{}, rng).values[0] <= 0.5;
  CHECK(static_cast<double>(low) / n == doctest::Approx(2.0 / 3).epsilon(0.05));
}

TEST_CASE("earpc_propose: zero rewards on both sides fall back to a coin") {
  RngStream rng(36, 1);
  const auto buf = two_sided_buffer(0.0, 0.0);
  const auto specs = sigma_spec(1.0);
  int low = 0;
  const int n = 3000;
  for (int i = 0; i < n; ++i)
    low += earpc_propose(buf, specs, EarpcOptions{}, rng).values[0] <= 0.5;
  CHECK(static_cast<double>(low) / n == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("earpc_propose: cold start is uniform over the whole range") {
  RngStream rng(37, 1);
  const std::vector<ExperienceTuple> empty;
  const auto specs = sigma_spec(2.0);
  double lo = 2.0, hi = 0.0, sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const auto p = earpc_propose(empty, specs, EarpcOptions{}, rng);
    CHECK(p.boundaries[0].empty());
    lo = std::min(lo, p.values[0]);
    hi = std::max(hi, p.values[0]);
    sum += p.values[0];
  }
  CHECK(lo < 0.1);
  CHECK(hi > 1.9);
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("earpc_state_value: squared-mean combination of the side rewards") {
  RngStream rng(38, 1);
  const auto specs = sigma_spec(1.0);
  // q1=10, q2=0 -> (100 + 0) / 10 = 10
  CHECK(earpc_state_value(two_sided_buffer(10.0, 0.0), specs, EarpcOptions{}, rng) ==
        doctest::Approx(10.0).epsilon(1e-9));
  // q1=q2=5 -> (25 + 25) / 10 = 5
  CHECK(earpc_state_value(two_sided_buffer(5.0, 5.0), specs, EarpcOptions{}, rng) ==
        doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("earpc_state_value: empty buffer is 0, small buffer is the mean reward") {
  RngStream rng(39, 1);
  const auto specs = sigma_spec(1.0);
  CHECK(earpc_state_value({}, specs, EarpcOptions{}, rng) == 0.0);
  std::vector<ExperienceTuple> small;
  small.push_back(tuple_of(0.2, 4.0));
  small.push_back(tuple_of(0.8, 8.0));
  CHECK(earpc_state_value(small, specs, EarpcOptions{}, rng) ==
        doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("earpc controller: learns the rewarded side from feedback alone") {
  const auto ctl = make_controller("earpc", sigma_spec(1.0));
  RngStream rng(40, 1);
  const ObservableVector o;
  // cold start first: proposals cover the whole range
  double hi = 0.0;
  for (int i = 0; i < 50; ++i)
    hi = std::max(hi, ctl->propose(o, rng)[0]);
  CHECK(hi > 0.6);
  CHECK(ctl->boundaries().empty());

  for (const auto& t : two_sided_buffer(10.0, 0.0)) ctl->feedback(t);
  for (int i = 0; i < 50; ++i) CHECK(ctl->propose(o, rng)[0] <= 0.5);
  REQUIRE(ctl->boundaries().size() == 1);
  CHECK(ctl->boundaries()[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("earpc controller: buffer honors its FIFO cap") {
  EarpcOptions opt;
  opt.buffer_cap = 5;
  const auto ctl = make_controller("earpc", sigma_spec(1.0), RlParams{}, opt);
  for (int i = 0; i < 12; ++i) ctl->feedback(tuple_of(0.1, 1.0));
  const auto snap = json::parse(ctl->snapshot());
  CHECK(snap["buffer"] == 5);
}

// ---------------------------------------------------------------------------
// fixed-interval q-learning
// ---------------------------------------------------------------------------

namespace {

double max_q(const Controller& ctl) {
  const auto snap = json::parse(ctl.snapshot());
  double best = 0.0;
  for (const auto& v : snap["q"]) best = std::max(best, v.get<double>());
  return best;
}

}  // namespace

TEST_CASE("qlearn: first reward writes alpha * r, zero reward decays via alpha0") {
  RlParams rl;
  rl.epsilon = 0.0;  // deterministic greedy
  const auto ctl = make_controller("qlearn", sigma_spec(1.0), rl);
  RngStream rng(41, 1);
  const ObservableVector o;

  const double v1 = ctl->propose(o, rng)[0];
  ExperienceTuple t = tuple_of(v1, 10.0);
  ctl->feedback(t);
  // q[a] = 0 + 0.9 * (10 + 0.8 * 0 - 0) = 9 on the proposed action
  const auto part = Partition::equal_intervals(0.0, 1.0, 5);
  const auto a1 = part.index_of(v1);
  auto snap = json::parse(ctl->snapshot());
  REQUIRE(snap["q"].size() == 5);
  CHECK(snap["q"][a1].get<double>() == doctest::Approx(9.0).epsilon(1e-12));

  const double v2 = ctl->propose(o, rng)[0];
  CHECK(part.index_of(v2) == a1);  // greedy sticks with the learned action
  ctl->feedback(tuple_of(v2, 0.0));
  // q[a] = 9 + 0.02 * (0 + 0.8 * 9 - 9) = 8.964
  snap = json::parse(ctl->snapshot());
  CHECK(snap["q"][a1].get<double>() == doctest::Approx(8.964).epsilon(1e-12));
}

TEST_CASE("qlearn: constant reward drives q to its fixed point r/(1-gamma)") {
  RlParams rl;
  rl.epsilon = 0.0;
  const auto ctl = make_controller("qlearn", sigma_spec(1.0), rl);
  RngStream rng(42, 1);
  const ObservableVector o;
  for (int i = 0; i < 400; ++i) {
    const double v = ctl->propose(o, rng)[0];
    ctl->feedback(tuple_of(v, 7.0));
  }
  CHECK(max_q(*ctl) == doctest::Approx(35.0).epsilon(1e-9));
}

TEST_CASE("qlearn: unlearned table explores all intervals") {
  const auto ctl = make_controller("qlearn", sigma_spec(1.0));  // eps = 0.1
  RngStream rng(43, 1);
  const ObservableVector o;
  const auto part = Partition::equal_intervals(0.0, 1.0, 5);
  std::vector<int> counts(5, 0);
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const double v = ctl->propose(o, rng)[0];
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    ++counts[part.index_of(v)];
    ctl->feedback(tuple_of(v, 0.0));  // zero reward keeps the table flat
  }
  for (int c : counts) {
    CHECK(c > n / 5 - 300);
    CHECK(c < n / 5 + 300);
  }
}

TEST_CASE("qlearn: boundaries expose the fixed grid") {
  const auto ctl = make_controller("qlearn", sigma_spec(1.0));
  const auto b = ctl->boundaries();
  REQUIRE(b.size() == 4);
  CHECK(b == std::vector<double>{0.2, 0.4, 0.6, 0.8});
}

// ---------------------------------------------------------------------------
// observation-tree q-learning
// ---------------------------------------------------------------------------

namespace {

// drives one controller through a propose/feedback cycle with a self-looping
// observation whose first component is `o`
double cycle(Controller& ctl, double o, double reward, RngStream& rng) {
  const auto v = ctl.propose(obs_at(o), rng);
  ExperienceTuple t;
  t.obs_before = {o, 0.0, 0.0, 0.0};
  t.values = v;
  t.obs_after = {o, 0.0, 0.0, 0.0};
  t.reward = reward;
  ctl.feedback(t);
  return v[0];
}

}  // namespace

TEST_CASE("qtree: starts as a single leaf with a full action table") {
  const auto ctl = make_controller("qtree", sigma_spec(1.0));
  const auto snap = json::parse(ctl->snapshot());
  CHECK(snap["leaves"] == 1);
  CHECK(snap["tree"]["leaf"] == true);
  CHECK(snap["tree"]["q"].size() == 5);
}

TEST_CASE("qtree: reward contrast across an observable grows the tree") {
  const auto ctl = make_controller("qtree", sigma_spec(1.0));
  RngStream rng(44, 1);
  // alternate low/high diversity; only high-diversity states pay off
  const double low[] = {0.05, 0.10, 0.15, 0.20, 0.25};
  const double high[] = {0.55, 0.60, 0.65, 0.70, 0.75};
  for (int i = 0; i < 5; ++i) {
    cycle(*ctl, low[i], 0.0, rng);
    cycle(*ctl, high[i], 100.0, rng);
  }
  const auto snap = json::parse(ctl->snapshot());
  CHECK(snap["leaves"] == 2);
  CHECK(snap["tree"]["obs_index"] == 0);
  const double split = snap["tree"]["split_value"].get<double>();
  CHECK(split > 0.25);
  CHECK(split < 0.55);
  // both children inherited an action table of the full size
  CHECK(snap["tree"]["left"]["q"].size() == 5);
  CHECK(snap["tree"]["right"]["q"].size() == 5);
}

TEST_CASE("qtree: iid noise splits far less often than a real contrast") {
  // The grower picks the MINIMUM KS p over every candidate midpoint and splits
  // when it is < 0.05 — an uncorrected maximally-selected statistic, so its
  // effective false-split rate under the null is well above the nominal 5%
  // (measured: mean 22/50 at 10 noise feedbacks, range 17-25 over 20 seeds).
  // That anticonservatism is a property of the reproduced method itself; what
  // this test pins is that the measured rate stays in its band and sits far
  // below the 50/50 split rate of the genuine two-level fixture above.
  RngStream rng(45, 1);
  int split_trials = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto ctl = make_controller("qtree", sigma_spec(1.0));
    for (int i = 0; i < 10; ++i)
      cycle(*ctl, rng.next_double(), rng.next_double(), rng);
    const auto snap = json::parse(ctl->snapshot());
    split_trials += snap["leaves"].get<int>() > 1;
  }
  CHECK(split_trials <= 30);
  CHECK(split_trials >= 10);
}

TEST_CASE("qtree: proposals stay inside the parameter range") {
  const auto ctl = make_controller("qtree", sigma_spec(3.0));
  RngStream rng(46, 1);
  for (int i = 0; i < 200; ++i) {
    const double v = cycle(*ctl, rng.next_double(), 10.0 * rng.next_double(), rng);
    CHECK(v >= 0.0);
    CHECK(v <= 3.0);
  }
}

TEST_CASE("state tree: routing walks the decision path") {
  StateNode root;
  root.obs_index = 0;
  root.split_value = 0.5;
  root.left = std::make_unique<StateNode>();
  root.right = std::make_unique<StateNode>();
  root.right->obs_index = 2;
  root.right->split_value = 3.0;
  root.right->left = std::make_unique<StateNode>();
  root.right->right = std::make_unique<StateNode>();

  CHECK(root.leaf_count() == 3);
  const std::vector<double> a = {0.5, 9.0, 9.0, 9.0};  // boundary goes left
  CHECK(root.route(a) == root.left.get());
  const std::vector<double> b = {0.6, 0.0, 3.0, 0.0};
  CHECK(root.route(b) == root.right->left.get());
  const std::vector<double> c = {0.6, 0.0, 3.1, 0.0};
  CHECK(root.route(c) == root.right->right.get());
}

// ---------------------------------------------------------------------------
// earpc inside the observation tree
// ---------------------------------------------------------------------------

TEST_CASE("earpc-tree: splits on observation contrast, leaves carry no q") {
  const auto ctl = make_controller("earpc-tree", sigma_spec(1.0));
  RngStream rng(47, 1);
  const double low[] = {0.05, 0.10, 0.15, 0.20, 0.25};
  const double high[] = {0.55, 0.60, 0.65, 0.70, 0.75};
  for (int i = 0; i < 5; ++i) {
    cycle(*ctl, low[i], 0.0, rng);
    cycle(*ctl, high[i], 100.0, rng);
  }
  const auto snap = json::parse(ctl->snapshot());
  CHECK(snap["leaves"] == 2);
  CHECK(snap["tree"]["obs_index"] == 0);
  CHECK_FALSE(snap["tree"]["left"].contains("q"));
  CHECK_FALSE(snap["tree"]["right"].contains("q"));
}

TEST_CASE("earpc-tree: behaves like plain earpc while the tree is one leaf") {
  const auto ctl = make_controller("earpc-tree", sigma_spec(1.0));
  RngStream rng(48, 1);
  const ObservableVector o;
  // same constant observation throughout: no split material on the obs axis,
  // but the leaf buffer drives the within-leaf value split
  for (const auto& t : two_sided_buffer(10.0, 0.0)) {
    (void)ctl->propose(o, rng);
    ctl->feedback(t);
  }
  int low = 0;
  for (int i = 0; i < 50; ++i) low += ctl->propose(o, rng)[0] <= 0.5;
  CHECK(low == 50);
}

// ---------------------------------------------------------------------------
// recursive ks discretization + adaptive controller
// ---------------------------------------------------------------------------

TEST_CASE("split_of_range: recovers a two-level reward staircase") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 80; ++i) {
    const double v = (i + 0.5) / 80.0;
    samples.push_back({v, std::floor(v * 4.0)});  // reward 0,1,2,3 per quartile
  }
  const ParameterSpec spec{"sigma", 0.0, 1.0};
  const auto part = split_of_range(samples, spec, 2);
  REQUIRE(part.has_value());
  REQUIRE(part->size() == 4);  // depth 2 -> at most 4, staircase fills them
  const auto cuts = part->cuts();
  CHECK(cuts[0] == doctest::Approx(0.25).epsilon(0.03));
  CHECK(cuts[1] == doctest::Approx(0.50).epsilon(0.03));
  CHECK(cuts[2] == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("split_of_range: depth limit caps the interval count") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 80; ++i) {
    const double v = (i + 0.5) / 80.0;
    samples.push_back({v, std::floor(v * 4.0)});
  }
  const ParameterSpec spec{"sigma", 0.0, 1.0};
  const auto part = split_of_range(samples, spec, 1);
  REQUIRE(part.has_value());
  CHECK(part->size() == 2);
}

TEST_CASE("split_of_range: constant rewards produce no split") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 60; ++i) samples.push_back({i / 60.0, 5.0});
  const ParameterSpec spec{"sigma", 0.0, 1.0};
  CHECK_FALSE(split_of_range(samples, spec, 2).has_value());
}

TEST_CASE("split_of_range: iid noise splits far less often than a step") {
  // Same caveat as the tree grower: the min-p selection over every candidate
  // midpoint is anticonservative, so iid rewards do get split well above the
  // nominal 5% rate (measured at n=12: mean 12/50, range 6-21 over 20 seeds,
  // climbing with n).  Pin the measured band and the contrast with the
  // deterministic 50/50 split rate of the genuine reward step above.
  RngStream rng(49, 1);
  int found = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 12; ++i)
      samples.push_back({rng.next_double(), rng.next_double()});
    const ParameterSpec spec{"sigma", 0.0, 1.0};
    found += split_of_range(samples, spec, 2).has_value();
  }
  CHECK(found <= 25);
  CHECK(found >= 3);
}

TEST_CASE("adaptive: starts with the whole range as one action") {
  const auto ctl = make_controller("adaptive", sigma_spec(2.0));
  RngStream rng(50, 1);
  CHECK(ctl->boundaries().empty());
  double lo = 2.0, hi = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double v = ctl->propose(ObservableVector{}, rng)[0];
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ctl->feedback(tuple_of(v, 0.0));
  }
  CHECK(lo < 0.2);
  CHECK(hi > 1.8);
}

TEST_CASE("adaptive: discretizes at the reward boundary and then exploits it") {
  AdaptiveOptions opt;
  opt.min_buffer = 40;
  const auto ctl = make_controller("adaptive", sigma_spec(1.0), RlParams{},
                                   EarpcOptions{}, TreeOptions{}, opt);
  RngStream rng(51, 1);
  const ObservableVector o;
  const auto play = [&] {
    const double v = ctl->propose(o, rng)[0];
    ctl->feedback(tuple_of(v, v <= 0.3 ? 100.0 : 0.0));
    return v;
  };
  for (int i = 0; i < 60; ++i) play();

  auto snap = json::parse(ctl->snapshot());
  REQUIRE(snap["agents"].size() == 1);
  const auto& agent = snap["agents"][0];
  CHECK(agent["rediscretizations"] == 1);
  REQUIRE(agent["cuts"].size() == 1);
  const double cut = agent["cuts"][0].get<double>();
  CHECK(cut > 0.2);
  CHECK(cut < 0.4);
  CHECK(agent["q"].size() == 2);
  REQUIRE(ctl->boundaries() == std::vector<double>{cut});

  // with the split in place the rewarded interval dominates the proposals
  for (int i = 0; i < 300; ++i) play();
  int low = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) low += play() <= cut;
  CHECK(low > static_cast<int>(0.8 * n));

  snap = json::parse(ctl->snapshot());
  CHECK(snap["agents"][0]["rediscretizations"] == 1);  // no spurious re-splits
}

TEST_CASE("adaptive: q table always matches the partition size") {
  AdaptiveOptions opt;
  opt.min_buffer = 30;
  const auto ctl = make_controller("adaptive", sigma_spec(1.0), RlParams{},
                                   EarpcOptions{}, TreeOptions{}, opt);
  RngStream rng(52, 1);
  const ObservableVector o;
  for (int i = 0; i < 200; ++i) {
    const double v = ctl->propose(o, rng)[0];
    // staircase reward: enough contrast to re-discretize repeatedly
    ctl->feedback(tuple_of(v, std::floor(v * 4.0)));
    const auto snap = json::parse(ctl->snapshot());
    const auto& agent = snap["agents"][0];
    CHECK(agent["q"].size() == agent["cuts"].size() + 1);
  }
}

TEST_CASE("adaptive: controls each parameter independently") {
  std::vector<ParameterSpec> specs = {{"sigma", 0.0, 1.0}, {"rate", 2.0, 4.0}};
  const auto ctl = make_controller("adaptive", specs);
  RngStream rng(53, 1);
  for (int i = 0; i < 50; ++i) {
    const auto v = ctl->propose(ObservableVector{}, rng);
    REQUIRE(v.size() == 2);
    CHECK(v[0] >= 0.0);
    CHECK(v[0] <= 1.0);
    CHECK(v[1] >= 2.0);
    CHECK(v[1] <= 4.0);
    ExperienceTuple t;
    t.obs_before = {0.0, 0.0, 0.0, 0.0};
    t.values = v;
    t.obs_after = {0.0, 0.0, 0.0, 0.0};
    t.reward = 1.0;
    ctl->feedback(t);
  }
  const auto snap = json::parse(ctl->snapshot());
  CHECK(snap["agents"].size() == 2);
  CHECK(snap["agents"][1]["name"] == "rate");
}

// ---------------------------------------------------------------------------
// factory
// ---------------------------------------------------------------------------

TEST_CASE("factory: canonical names and aliases") {
  CHECK(controller_names() ==
        std::vector<std::string>{"adaptive", "qlearn", "qtree", "earpc",
                                 "earpc-tree"});
  CHECK(canonical_controller_name("A") == "adaptive");
  CHECK(canonical_controller_name("Q") == "qlearn");
  CHECK(canonical_controller_name("K") == "qtree");
  CHECK(canonical_controller_name("E") == "earpc");
  CHECK(canonical_controller_name("E+K") == "earpc-tree");
  CHECK(canonical_controller_name("ek") == "earpc-tree");
  CHECK(canonical_controller_name("qlearn") == "qlearn");
  CHECK_THROWS_AS((void)canonical_controller_name("sarsa"), std::domain_error);
  for (const auto& name : controller_names())
    CHECK(canonical_controller_name(short_controller_name(name)) == name);
}

TEST_CASE("factory: rejects an empty parameter list") {
  CHECK_THROWS_AS((void)make_controller("qlearn", {}), std::domain_error);
}

TEST_CASE("factory: every controller proposes within [0, k] under fuzz") {
  RngStream seed_rng(54, 1);
  for (const auto& name : controller_names()) {
    CAPTURE(name);
    const double k = 3.0;
    auto ctl = make_controller(name, sigma_spec(k), RlParams{}, EarpcOptions{},
                               TreeOptions{}, AdaptiveOptions{},
                               RngStream(54, 99));
    RngStream rng = seed_rng.split(stable_hash(name));
    for (int i = 0; i < 150; ++i) {
      const double o_before = rng.next_double();
      const double o_after = rng.next_double();
      const auto v = ctl->propose(obs_at(o_before), rng);
      REQUIRE(v.size() == 1);
      CHECK(v[0] >= 0.0);
      CHECK(v[0] <= k);
      ExperienceTuple t;
      t.obs_before = {o_before, 0.0, 0.0, 0.0};
      t.values = v;
      t.obs_after = {o_after, 0.0, 0.0, 0.0};
      t.reward = 10.0 * rng.next_double();
      ctl->feedback(t);
    }
    CHECK(json::parse(ctl->snapshot()).is_object());
  }
}
