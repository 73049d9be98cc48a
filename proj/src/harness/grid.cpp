#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <thread>

#include "apc/harness.hpp"

namespace apc {

RunRow execute_run(const HarnessConfig& cfg, const GridCell& cell, int run,
                   RunRecord* record_out, std::string* snapshot_out) {
  RunRow row;
  row.controller = cell.controller;
  row.problem = cell.problem;
  row.k = cell.k;
  row.mu = cell.mu;
  row.lambda = cell.lambda;
  row.run = run;
  row.seed = run_stream_id(cell, run);

  try {
    ProblemInstance p = ProblemInstance::make(cell.problem, cfg.dimension);
    p.epsilon = cfg.precision;
    p.rosenbrock_canonical = cfg.rosenbrock_canonical;

    EaConfig ea;
    ea.mu = cell.mu;
    ea.lambda = cell.lambda;
    ea.k = cell.k;
    ea.c = cfg.reward_scale;
    ea.max_generations = cfg.max_generations;
    ea.ratio_reward = cfg.ratio_reward;

    const std::vector<ParameterSpec> specs{{"sigma", 0.0, cell.k}};
    const RngStream run_rng(cfg.seed, row.seed);
    auto controller =
        make_controller(cell.controller, specs, cfg.rl, cfg.earpc, cfg.tree,
                        cfg.adaptive, run_rng.split(2));

    RunRecord rec = run_to_optimum(ea, p, *controller, run_rng,
                                   record_out != nullptr);
    rec.controller = cell.controller;
    rec.seed = row.seed;

    row.generations = rec.generations;
    row.success = rec.success;
    row.evaluations = rec.evaluations;
    if (snapshot_out) *snapshot_out = controller->snapshot();
    if (record_out) *record_out = std::move(rec);
  } catch (const std::exception&) {
    row.failed = true;
    row.success = false;
  }
  return row;
}

GridResult run_grid(const HarnessConfig& cfg) {
  validate(cfg);

  const std::vector<GridCell> cells = grid_cells(cfg);
  struct Task {
    std::size_t cell;
    int run;
  };
  std::vector<Task> tasks;
  tasks.reserve(cells.size() * static_cast<std::size_t>(cfg.runs));
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < cfg.runs; ++r) tasks.push_back(Task{c, r});

  const std::string trace_dir = cfg.out_dir + "/traces";
  if (cfg.traces) std::filesystem::create_directories(trace_dir);

  GridResult res;
  res.rows.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& t = tasks[i];
      if (cfg.traces) {
        RunRecord rec;
        res.rows[i] = execute_run(cfg, cells[t.cell], t.run, &rec);
        write_trace_files(rec, trace_dir,
                          trace_base_name(cells[t.cell], t.run));
      } else {
        res.rows[i] = execute_run(cfg, cells[t.cell], t.run);
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& row : res.rows)
    if (row.failed) ++res.failed_runs;
  res.summary = summarize(res.rows);
  return res;
}

namespace {

std::string cell_key(const RunRow& r) {
  return r.controller + "|" + r.problem + "|" + fmt_double(r.k) + "|" +
         std::to_string(r.mu) + "|" + std::to_string(r.lambda);
}

std::string row_key(const CellStats& c) {
  return c.problem + "|" + fmt_double(c.k) + "|" + std::to_string(c.mu) + "|" +
         std::to_string(c.lambda);
}

}  // namespace

GridSummary summarize(const std::vector<RunRow>& rows) {
  GridSummary s;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<const RunRow*>> members;

  for (const auto& row : rows) {
    const std::string key = cell_key(row);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, s.cells.size()).first;
      CellStats c;
      c.controller = row.controller;
      c.problem = row.problem;
      c.k = row.k;
      c.mu = row.mu;
      c.lambda = row.lambda;
      s.cells.push_back(c);
      members.emplace_back();
    }
    members[it->second].push_back(&row);
  }

  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    CellStats& c = s.cells[i];
    c.runs = static_cast<int>(members[i].size());
    double sum = 0.0;
    for (const RunRow* r : members[i]) {
      if (!r->success) continue;
      ++c.successes;
      sum += r->generations;
    }
    c.success_rate = c.runs ? static_cast<double>(c.successes) / c.runs : 0.0;
    if (c.successes > 0) {
      c.mean_generations = sum / c.successes;
      double ss = 0.0;
      for (const RunRow* r : members[i]) {
        if (!r->success) continue;
        const double d = r->generations - c.mean_generations;
        ss += d * d;
      }
      c.stddev_generations =
          c.successes > 1 ? std::sqrt(ss / (c.successes - 1)) : 0.0;
    } else {
      c.mean_generations = std::nan("");
      c.stddev_generations = std::nan("");
    }
  }

  // rows of the comparison: same problem and (k, mu, lambda), one cell per
  // controller; the lowest mean wins, exact ties count for every holder
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> group_order;
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const std::string key = row_key(s.cells[i]);
    if (!groups.count(key)) group_order.push_back(key);
    groups[key].push_back(i);
  }
  for (const auto& c : s.cells)
    if (!s.wins.count(c.controller)) s.wins[c.controller] = 0;

  for (const auto& key : group_order) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i : groups[key]) {
      const CellStats& c = s.cells[i];
      if (c.successes > 0 && c.mean_generations < best) {
        best = c.mean_generations;
        any = true;
      }
    }
    if (!any) continue;
    std::size_t holders = 0;
    for (std::size_t i : groups[key])
      if (s.cells[i].successes > 0 && s.cells[i].mean_generations == best)
        ++holders;
    for (std::size_t i : groups[key]) {
      CellStats& c = s.cells[i];
      if (c.successes > 0 && c.mean_generations == best) {
        c.best_in_row = true;
        c.tied_best = holders > 1;
        s.wins[c.controller] += 1;
      }
    }
    if (holders > 1) ++s.tie_rows;
  }
  return s;
}

}  // namespace apc
