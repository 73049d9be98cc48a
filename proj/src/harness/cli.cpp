#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "apc/harness.hpp"

namespace apc {

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int runs = 0;
  int jobs = 0;
  std::string out;
  std::vector<std::string> controllers;
  std::vector<std::string> problems;
  std::string format;
  std::vector<double> k_values;
  std::vector<int> mu_values;
  std::vector<int> lambda_values;
  int max_generations = -1;
  int dimension = 0;
  double precision = 0.0;
  bool traces = false;
};

void add_common_options(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--runs", f.runs, "runs per grid cell");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--controllers", f.controllers,
                  "controllers (adaptive,qlearn,qtree,earpc,earpc-tree or "
                  "A,Q,K,E,E+K)")
      ->delimiter(',');
  cmd->add_option("--problems", f.problems,
                  "problems (sphere,rosenbrock,levi,rastrigin)")
      ->delimiter(',');
  cmd->add_option("--format", f.format, "stdout table format: csv|md|json");
  cmd->add_option("--k", f.k_values, "mutation-strength range bounds")
      ->delimiter(',');
  cmd->add_option("--mu", f.mu_values, "parent population sizes")
      ->delimiter(',');
  cmd->add_option("--lambda", f.lambda_values, "offspring counts")
      ->delimiter(',');
  cmd->add_option("--max-generations", f.max_generations, "generation budget");
  cmd->add_option("--dimension", f.dimension, "problem dimension");
  cmd->add_option("--precision", f.precision, "convergence precision");
}

HarnessConfig build_config(const CommonFlags& f, const CLI::App* cmd) {
  HarnessConfig cfg;
  if (cmd->count("--config")) cfg = load_config_file(f.config_path);
  if (cmd->count("--seed")) cfg.seed = f.seed;
  if (cmd->count("--runs")) cfg.runs = f.runs;
  if (cmd->count("--jobs")) cfg.jobs = f.jobs;
  if (cmd->count("--out")) cfg.out_dir = f.out;
  if (cmd->count("--controllers")) cfg.controllers = f.controllers;
  if (cmd->count("--problems")) cfg.problems = f.problems;
  if (cmd->count("--format")) cfg.format = f.format;
  if (cmd->count("--k")) cfg.k_values = f.k_values;
  if (cmd->count("--mu")) cfg.mu_values = f.mu_values;
  if (cmd->count("--lambda")) cfg.lambda_values = f.lambda_values;
  if (cmd->count("--max-generations")) cfg.max_generations = f.max_generations;
  if (cmd->count("--dimension")) cfg.dimension = f.dimension;
  if (cmd->count("--precision")) cfg.precision = f.precision;
  return cfg;
}

void print_summary(const GridSummary& summary, const std::string& format) {
  if (format == "md")
    std::cout << summary_markdown(summary);
  else if (format == "json")
    std::cout << summary_json(summary);
  else
    std::cout << summary_csv(summary);
}

void write_summary_files(const GridSummary& summary, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir + "/summary.json", summary_json(summary));
  write_file(dir + "/summary.csv", summary_csv(summary));
  write_file(dir + "/summary.md", summary_markdown(summary));
}

int do_run(const HarnessConfig& cfg) {
  const GridResult res = run_grid(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_file(cfg.out_dir + "/runs.csv", runs_csv(res.rows));
  write_summary_files(res.summary, cfg.out_dir);
  print_summary(res.summary, cfg.format);
  if (res.failed_runs > 0) {
    std::cerr << res.failed_runs << " run(s) failed; see " << cfg.out_dir
              << "/runs.csv\n";
    return 3;
  }
  return 0;
}

int do_table(const std::string& in_path, const std::string& format,
             const std::string& out_dir) {
  const auto rows = parse_runs_csv(read_file(in_path));
  const GridSummary summary = summarize(rows);
  if (!out_dir.empty()) write_summary_files(summary, out_dir);
  print_summary(summary, format);
  return 0;
}

int do_trace(const HarnessConfig& cfg, int run_index) {
  validate(cfg);
  if (cfg.controllers.size() != 1 || cfg.problems.size() != 1 ||
      cfg.k_values.size() != 1 || cfg.mu_values.size() != 1 ||
      cfg.lambda_values.size() != 1)
    throw ConfigError(
        "trace needs exactly one controller, problem, k, mu and lambda");

  const GridCell cell{canonical_controller_name(cfg.controllers[0]),
                      cfg.problems[0], cfg.k_values[0], cfg.mu_values[0],
                      cfg.lambda_values[0]};
  RunRecord rec;
  std::string snapshot;
  const RunRow row = execute_run(cfg, cell, run_index, &rec, &snapshot);

  std::filesystem::create_directories(cfg.out_dir);
  const std::string base = trace_base_name(cell, run_index);
  write_trace_files(rec, cfg.out_dir, base);
  write_file(cfg.out_dir + "/" + base + "_snapshot.json", snapshot + "\n");

  std::cout << base << ": " << (row.success ? "converged" : "stopped")
            << " after " << row.generations << " generations ("
            << row.evaluations << " evaluations)\n"
            << "files: " << cfg.out_dir << "/" << base << ".csv, " << base
            << "_splits.csv, " << base << "_snapshot.json\n";
  return row.failed ? 3 : 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"benchmark harness for online parameter control in a "
               "(mu+lambda) evolution strategy"};
  app.require_subcommand(1);

  CLI::App* run_cmd = app.add_subcommand("run", "execute a benchmark grid");
  CommonFlags run_flags;
  add_common_options(run_cmd, run_flags);
  run_cmd->add_flag("--traces", run_flags.traces,
                    "write per-run trace CSVs (large)");

  CLI::App* table_cmd =
      app.add_subcommand("table", "re-aggregate a runs.csv into tables");
  std::string table_in = "out/runs.csv";
  std::string table_format = "md";
  std::string table_out;
  table_cmd->add_option("--in", table_in, "runs.csv produced by `run`");
  table_cmd->add_option("--format", table_format, "csv|md|json");
  table_cmd->add_option("--out", table_out, "also rewrite summary files here");

  CLI::App* trace_cmd =
      app.add_subcommand("trace", "run one configuration and dump its traces");
  CommonFlags trace_flags;
  add_common_options(trace_cmd, trace_flags);
  int trace_run = 0;
  trace_cmd->add_option("--run", trace_run, "run index within the cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      HarnessConfig cfg = build_config(run_flags, run_cmd);
      if (run_cmd->count("--traces")) cfg.traces = run_flags.traces;
      return do_run(cfg);
    }
    if (table_cmd->parsed())
      return do_table(table_in, table_format, table_out);
    if (trace_cmd->parsed()) {
      HarnessConfig cfg = build_config(trace_flags, trace_cmd);
      return do_trace(cfg, trace_run);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace apc
