#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "apc/harness.hpp"
#include "json.hpp"

namespace apc {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& scope) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown config key: " + scope + item.key());
}

template <typename T>
void read_to(const json& j, const char* key, T& out, const std::string& scope) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for " + scope + key + ": " + e.what());
  }
}

}  // namespace

HarnessConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  expect_keys(j,
              {"problems", "controllers", "k", "mu", "lambda", "runs",
               "dimension", "precision", "max_generations", "seed", "reward",
               "rl", "earpc", "tree", "adaptive", "rosenbrock_canonical",
               "jobs", "out", "format", "traces"},
              "");

  HarnessConfig cfg;
  read_to(j, "problems", cfg.problems, "");
  read_to(j, "controllers", cfg.controllers, "");
  read_to(j, "k", cfg.k_values, "");
  read_to(j, "mu", cfg.mu_values, "");
  read_to(j, "lambda", cfg.lambda_values, "");
  read_to(j, "runs", cfg.runs, "");
  read_to(j, "dimension", cfg.dimension, "");
  read_to(j, "precision", cfg.precision, "");
  read_to(j, "max_generations", cfg.max_generations, "");
  read_to(j, "seed", cfg.seed, "");
  read_to(j, "rosenbrock_canonical", cfg.rosenbrock_canonical, "");
  read_to(j, "jobs", cfg.jobs, "");
  read_to(j, "out", cfg.out_dir, "");
  read_to(j, "format", cfg.format, "");
  read_to(j, "traces", cfg.traces, "");

  if (j.contains("reward")) {
    const json& r = j.at("reward");
    expect_keys(r, {"scale", "form"}, "reward.");
    read_to(r, "scale", cfg.reward_scale, "reward.");
    std::string form = cfg.ratio_reward ? "ratio" : "relative-drop";
    read_to(r, "form", form, "reward.");
    if (form == "ratio")
      cfg.ratio_reward = true;
    else if (form == "relative-drop")
      cfg.ratio_reward = false;
    else
      throw ConfigError("reward.form must be relative-drop or ratio");
  }
  if (j.contains("rl")) {
    const json& r = j.at("rl");
    expect_keys(r, {"alpha", "alpha0", "gamma", "epsilon"}, "rl.");
    read_to(r, "alpha", cfg.rl.alpha, "rl.");
    read_to(r, "alpha0", cfg.rl.alpha0, "rl.");
    read_to(r, "gamma", cfg.rl.gamma, "rl.");
    read_to(r, "epsilon", cfg.rl.epsilon, "rl.");
  }
  if (j.contains("earpc")) {
    const json& r = j.at("earpc");
    expect_keys(r, {"min_tuples", "buffer_cap", "cluster_on_reward", "weighting"},
                "earpc.");
    read_to(r, "min_tuples", cfg.earpc.min_tuples, "earpc.");
    read_to(r, "buffer_cap", cfg.earpc.buffer_cap, "earpc.");
    read_to(r, "cluster_on_reward", cfg.earpc.cluster_on_reward, "earpc.");
    std::string w = "cluster-size";
    read_to(r, "weighting", w, "earpc.");
    if (w == "cluster-size")
      cfg.earpc.weighting = EntropyWeighting::cluster_size;
    else if (w == "pooled")
      cfg.earpc.weighting = EntropyWeighting::pooled;
    else
      throw ConfigError("earpc.weighting must be cluster-size or pooled");
  }
  if (j.contains("tree")) {
    const json& r = j.at("tree");
    expect_keys(r, {"leaf_cap", "intervals", "min_side", "significance"},
                "tree.");
    read_to(r, "leaf_cap", cfg.tree.leaf_cap, "tree.");
    read_to(r, "intervals", cfg.tree.intervals, "tree.");
    read_to(r, "min_side", cfg.tree.min_side, "tree.");
    read_to(r, "significance", cfg.tree.significance, "tree.");
  }
  if (j.contains("adaptive")) {
    const json& r = j.at("adaptive");
    expect_keys(r,
                {"min_buffer", "buffer_cap", "depth_limit", "delta_coeff",
                 "retry_stride", "significance", "min_side"},
                "adaptive.");
    read_to(r, "min_buffer", cfg.adaptive.min_buffer, "adaptive.");
    read_to(r, "buffer_cap", cfg.adaptive.buffer_cap, "adaptive.");
    read_to(r, "depth_limit", cfg.adaptive.depth_limit, "adaptive.");
    read_to(r, "delta_coeff", cfg.adaptive.delta_coeff, "adaptive.");
    read_to(r, "retry_stride", cfg.adaptive.retry_stride, "adaptive.");
    read_to(r, "significance", cfg.adaptive.significance, "adaptive.");
    read_to(r, "min_side", cfg.adaptive.min_side, "adaptive.");
  }
  return cfg;
}

HarnessConfig load_config_file(const std::string& path) {
  return parse_config_json(read_file(path));
}

void validate(const HarnessConfig& cfg) {
  if (cfg.problems.empty()) throw ConfigError("no problems selected");
  if (cfg.controllers.empty()) throw ConfigError("no controllers selected");
  if (cfg.k_values.empty() || cfg.mu_values.empty() || cfg.lambda_values.empty())
    throw ConfigError("k, mu and lambda must each have at least one value");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.dimension < 1) throw ConfigError("dimension must be >= 1");
  if (!(cfg.precision > 0)) throw ConfigError("precision must be > 0");
  if (cfg.max_generations < 0) throw ConfigError("max_generations must be >= 0");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.format != "csv" && cfg.format != "md" && cfg.format != "json")
    throw ConfigError("format must be csv, md or json");
  if (!(cfg.rl.epsilon >= 0 && cfg.rl.epsilon <= 1))
    throw ConfigError("rl.epsilon must be in [0, 1]");
  if (!(cfg.rl.alpha > 0 && cfg.rl.alpha <= 1) ||
      !(cfg.rl.alpha0 > 0 && cfg.rl.alpha0 <= 1))
    throw ConfigError("rl.alpha and rl.alpha0 must be in (0, 1]");
  if (!(cfg.rl.gamma >= 0 && cfg.rl.gamma < 1))
    throw ConfigError("rl.gamma must be in [0, 1)");
  if (cfg.tree.intervals < 1) throw ConfigError("tree.intervals must be >= 1");
  if (cfg.adaptive.depth_limit < 1)
    throw ConfigError("adaptive.depth_limit must be >= 1");
  if (cfg.adaptive.min_buffer < 1)
    throw ConfigError("adaptive.min_buffer must be >= 1");
  if (!(cfg.adaptive.delta_coeff > 0))
    throw ConfigError("adaptive.delta_coeff must be > 0");

  for (double k : cfg.k_values)
    if (!(k > 0)) throw ConfigError("k values must be > 0");
  for (int m : cfg.mu_values)
    if (m < 1) throw ConfigError("mu values must be >= 1");
  for (int l : cfg.lambda_values)
    if (l < 1) throw ConfigError("lambda values must be >= 1");

  std::set<std::string> seen;
  for (const auto& c : cfg.controllers) {
    std::string canon;
    try {
      canon = canonical_controller_name(c);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
    if (!seen.insert(canon).second)
      throw ConfigError("controller listed twice: " + canon);
  }
  for (const auto& p : cfg.problems) {
    try {
      (void)ProblemInstance::make(p, cfg.dimension);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
}

std::vector<GridCell> grid_cells(const HarnessConfig& cfg) {
  std::vector<GridCell> cells;
  for (double k : cfg.k_values)
    for (int mu : cfg.mu_values)
      for (int lambda : cfg.lambda_values)
        for (const auto& p : cfg.problems)
          for (const auto& c : cfg.controllers)
            cells.push_back(
                GridCell{canonical_controller_name(c), p, k, mu, lambda});
  return cells;
}

std::uint64_t run_stream_id(const GridCell& cell, int run) {
  std::ostringstream key;
  key << cell.controller << '|' << cell.problem << "|k=" << fmt_double(cell.k)
      << "|mu=" << cell.mu << "|lambda=" << cell.lambda << "|run=" << run;
  return stable_hash(key.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace apc
