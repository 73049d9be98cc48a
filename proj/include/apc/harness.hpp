#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "apc/controllers.hpp"
#include "apc/engine.hpp"

namespace apc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full benchmark configuration; the defaults reproduce the reference grid:
// 4 problems x 5 controllers x {1,2,3} x {1,5,10} x {1,3,7}, 30 runs each.
struct HarnessConfig {
  std::vector<std::string> problems = {"sphere", "rosenbrock", "levi",
                                       "rastrigin"};
  std::vector<std::string> controllers = {"adaptive", "qlearn", "qtree",
                                          "earpc", "earpc-tree"};
  std::vector<double> k_values = {1.0, 2.0, 3.0};
  std::vector<int> mu_values = {1, 5, 10};
  std::vector<int> lambda_values = {1, 3, 7};

  int runs = 30;
  int dimension = 2;
  double precision = 1e-5;
  int max_generations = 100000;
  std::uint64_t seed = 1;

  double reward_scale = 100.0;
  bool ratio_reward = false;
  bool rosenbrock_canonical = false;

  RlParams rl;
  EarpcOptions earpc;
  TreeOptions tree;
  AdaptiveOptions adaptive;

  int jobs = 1;
  std::string out_dir = "out";
  std::string format = "csv";  // csv | md | json
  bool traces = false;
};

// strict: unknown keys, wrong types and malformed values all throw ConfigError
HarnessConfig parse_config_json(const std::string& text);
HarnessConfig load_config_file(const std::string& path);
void validate(const HarnessConfig& cfg);  // throws ConfigError

struct GridCell {
  std::string controller;  // canonical name
  std::string problem;
  double k = 1.0;
  int mu = 1;
  int lambda = 1;
};

// (k, mu, lambda)-major, then problem, then controller
std::vector<GridCell> grid_cells(const HarnessConfig& cfg);

// Stream id of one run, derived from the cell identity (not its position in
// the grid) so partial grids reproduce the full grid's runs exactly.
std::uint64_t run_stream_id(const GridCell& cell, int run);

struct RunRow {
  std::string controller, problem;
  double k = 1.0;
  int mu = 1, lambda = 1;
  int run = 0;
  std::uint64_t seed = 0;
  int generations = 0;
  bool success = false;
  std::uint64_t evaluations = 0;
  bool failed = false;  // aborted by an exception (not a budget miss)
};

// One run; fills *record_out (with traces) and *snapshot_out when non-null.
RunRow execute_run(const HarnessConfig& cfg, const GridCell& cell, int run,
                   RunRecord* record_out = nullptr,
                   std::string* snapshot_out = nullptr);

struct CellStats {
  std::string controller, problem;
  double k = 1.0;
  int mu = 1, lambda = 1;
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_generations = 0.0;    // over successful runs; NaN when none
  double stddev_generations = 0.0;  // sample stddev, 0 for fewer than 2
  bool best_in_row = false;  // lowest mean among controllers of its row
  bool tied_best = false;
};

struct GridSummary {
  std::vector<CellStats> cells;
  std::map<std::string, int> wins;  // controller -> rows won (ties count for all)
  int tie_rows = 0;
};

GridSummary summarize(const std::vector<RunRow>& rows);

struct GridResult {
  std::vector<RunRow> rows;
  GridSummary summary;
  int failed_runs = 0;
};

// Executes the whole grid on cfg.jobs worker threads. Output is a pure
// function of the config: rows are slotted by task index and aggregated in a
// fixed order, so the thread count never changes any emitted byte.
GridResult run_grid(const HarnessConfig& cfg);

// shortest round-trip decimal form, used for every double that is emitted or
// hashed so output bytes and derived seeds are stable
std::string fmt_double(double v);

std::string runs_csv(const std::vector<RunRow>& rows);
std::vector<RunRow> parse_runs_csv(const std::string& text);
std::string summary_csv(const GridSummary& s);
std::string summary_markdown(const GridSummary& s);
std::string summary_json(const GridSummary& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string trace_base_name(const GridCell& cell, int run);
void write_trace_files(const RunRecord& rec, const std::string& dir,
                       const std::string& base);

// command-line entry point (subcommands: run, table, trace); returns the
// process exit code: 0 ok, 2 invalid config/usage, 3 some runs failed
int cli_main(int argc, char** argv);

}  // namespace apc
