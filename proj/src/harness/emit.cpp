#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "apc/harness.hpp"
#include "json.hpp"

namespace apc {

namespace {

constexpr const char* kRunsHeader =
    "controller,problem,k,mu,lambda,run,seed,generations,success,evaluations,"
    "failed";

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string runs_csv(const std::vector<RunRow>& rows) {
  std::ostringstream os;
  os << kRunsHeader << '\n';
  for (const auto& r : rows) {
    os << r.controller << ',' << r.problem << ',' << fmt_double(r.k) << ','
       << r.mu << ',' << r.lambda << ',' << r.run << ',' << r.seed << ','
       << r.generations << ',' << (r.success ? 1 : 0) << ',' << r.evaluations
       << ',' << (r.failed ? 1 : 0) << '\n';
  }
  return os.str();
}

std::vector<RunRow> parse_runs_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kRunsHeader)
    throw ConfigError("unrecognized runs file: bad header");
  std::vector<RunRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11)
      throw ConfigError("runs file line " + std::to_string(lineno) +
                        ": expected 11 fields");
    try {
      RunRow r;
      r.controller = f[0];
      r.problem = f[1];
      r.k = std::stod(f[2]);
      r.mu = std::stoi(f[3]);
      r.lambda = std::stoi(f[4]);
      r.run = std::stoi(f[5]);
      r.seed = std::stoull(f[6]);
      r.generations = std::stoi(f[7]);
      r.success = f[8] == "1";
      r.evaluations = std::stoull(f[9]);
      r.failed = f[10] == "1";
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ConfigError("runs file line " + std::to_string(lineno) +
                        ": malformed value");
    }
  }
  return rows;
}

std::string summary_csv(const GridSummary& s) {
  std::ostringstream os;
  os << "controller,problem,k,mu,lambda,runs,successes,success_rate,"
        "mean_generations,stddev_generations,best_in_row,tied_best\n";
  for (const auto& c : s.cells) {
    os << c.controller << ',' << c.problem << ',' << fmt_double(c.k) << ','
       << c.mu << ',' << c.lambda << ',' << c.runs << ',' << c.successes << ','
       << fmt_double(c.success_rate) << ',';
    if (std::isnan(c.mean_generations))
      os << ',';  // both stat fields stay empty
    else
      os << fmt_double(c.mean_generations) << ','
         << fmt_double(c.stddev_generations);
    os << ',' << (c.best_in_row ? 1 : 0) << ',' << (c.tied_best ? 1 : 0)
       << '\n';
  }
  os << "# wins";
  for (const auto& [name, n] : s.wins) os << ',' << name << '=' << n;
  os << ",tie_rows=" << s.tie_rows << '\n';
  return os.str();
}

std::string summary_json(const GridSummary& s) {
  nlohmann::ordered_json j;
  auto& cells = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : s.cells) {
    nlohmann::ordered_json e;
    e["controller"] = c.controller;
    e["problem"] = c.problem;
    e["k"] = c.k;
    e["mu"] = c.mu;
    e["lambda"] = c.lambda;
    e["runs"] = c.runs;
    e["successes"] = c.successes;
    e["success_rate"] = c.success_rate;
    if (std::isnan(c.mean_generations)) {
      e["mean_generations"] = nullptr;
      e["stddev_generations"] = nullptr;
    } else {
      e["mean_generations"] = c.mean_generations;
      e["stddev_generations"] = c.stddev_generations;
    }
    e["best_in_row"] = c.best_in_row;
    e["tied_best"] = c.tied_best;
    cells.push_back(std::move(e));
  }
  auto& wins = j["wins"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : s.wins) wins[name] = n;
  j["tie_rows"] = s.tie_rows;
  return j.dump(2) + "\n";
}

std::string summary_markdown(const GridSummary& s) {
  // column order: problems and controllers in first-appearance order
  std::vector<std::string> problems, controllers;
  for (const auto& c : s.cells) {
    if (std::find(problems.begin(), problems.end(), c.problem) ==
        problems.end())
      problems.push_back(c.problem);
    if (std::find(controllers.begin(), controllers.end(), c.controller) ==
        controllers.end())
      controllers.push_back(c.controller);
  }
  // row order: (k, mu, lambda) in first-appearance order
  std::vector<std::tuple<double, int, int>> rows;
  for (const auto& c : s.cells) {
    const auto key = std::make_tuple(c.k, c.mu, c.lambda);
    if (std::find(rows.begin(), rows.end(), key) == rows.end())
      rows.push_back(key);
  }

  std::map<std::string, const CellStats*> by_key;
  for (const auto& c : s.cells)
    by_key[c.problem + "|" + c.controller + "|" + fmt_double(c.k) + "|" +
           std::to_string(c.mu) + "|" + std::to_string(c.lambda)] = &c;

  std::ostringstream os;
  os << "| k | mu | lambda |";
  for (const auto& p : problems)
    for (const auto& c : controllers)
      os << ' ' << p << ' ' << short_controller_name(c) << " |";
  os << "\n|---|---|---|";
  for (std::size_t i = 0; i < problems.size() * controllers.size(); ++i)
    os << "---|";
  os << '\n';

  for (const auto& [k, mu, lambda] : rows) {
    os << "| " << fmt_double(k) << " | " << mu << " | " << lambda << " |";
    for (const auto& p : problems) {
      for (const auto& c : controllers) {
        const auto it = by_key.find(p + "|" + c + "|" + fmt_double(k) + "|" +
                                    std::to_string(mu) + "|" +
                                    std::to_string(lambda));
        if (it == by_key.end()) {
          os << " |";
          continue;
        }
        const CellStats& cs = *it->second;
        os << ' ';
        if (cs.successes == 0) {
          os << "-";
        } else {
          os << fixed1(cs.mean_generations);
          if (cs.success_rate < 1.0)
            os << " (" << fixed1(cs.success_rate * 100.0) << "%)";
          if (cs.best_in_row) os << (cs.tied_best ? " *=" : " *");
        }
        os << " |";
      }
    }
    os << '\n';
  }

  // per-column wins, as in the reference comparison's final row
  os << "| wins | | |";
  for (const auto& p : problems) {
    for (const auto& c : controllers) {
      int w = 0;
      for (const auto& cs : s.cells)
        if (cs.problem == p && cs.controller == c && cs.best_in_row) ++w;
      os << ' ' << w << " |";
    }
  }
  os << '\n';
  os << "\n`*` lowest mean generations among controllers of its row "
        "(`*=` shared); `(..%)` success rate when below 100%; `-` no "
        "successful run.\n";
  return os.str();
}

std::string trace_base_name(const GridCell& cell, int run) {
  std::string base = cell.controller + "_" + cell.problem + "_k" +
                     fmt_double(cell.k) + "_mu" + std::to_string(cell.mu) +
                     "_lambda" + std::to_string(cell.lambda) + "_run" +
                     std::to_string(run);
  std::replace(base.begin(), base.end(), '+', 'p');
  return base;
}

void write_trace_files(const RunRecord& rec, const std::string& dir,
                       const std::string& base) {
  std::ostringstream main_csv;
  main_csv << "generation,sigma,reward\n";
  for (std::size_t g = 0; g < rec.sigma_trace.size(); ++g)
    main_csv << (g + 1) << ',' << fmt_double(rec.sigma_trace[g]) << ','
             << fmt_double(rec.reward_trace[g]) << '\n';
  write_file(dir + "/" + base + ".csv", main_csv.str());

  std::size_t width = 0;
  for (const auto& cuts : rec.split_trace) width = std::max(width, cuts.size());
  std::ostringstream split_csv;
  split_csv << "generation";
  for (std::size_t i = 1; i <= width; ++i) split_csv << ",b" << i;
  split_csv << '\n';
  for (std::size_t g = 0; g < rec.split_trace.size(); ++g) {
    split_csv << (g + 1);
    const auto& cuts = rec.split_trace[g];
    for (std::size_t i = 0; i < width; ++i) {
      split_csv << ',';
      if (i < cuts.size()) split_csv << fmt_double(cuts[i]);
    }
    split_csv << '\n';
  }
  write_file(dir + "/" + base + "_splits.csv", split_csv.str());
}

}  // namespace apc
