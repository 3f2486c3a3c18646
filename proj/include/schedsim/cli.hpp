#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "schedsim/formats.hpp"
#include "schedsim/gantt.hpp"
#include "schedsim/gen.hpp"
#include "schedsim/oracle.hpp"
#include "schedsim/runner.hpp"

// Command layer behind the CLI binary. Exit codes: 0 ok, 1 validation or
// accounting violation, 2 usage/IO/parse errors.

namespace schedsim::cli {

inline bool log_enabled() {
  const char* v = std::getenv("SCHED_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

// --- gen -------------------------------------------------------------------

struct GenCmdOpts {
  GenSpec spec;
  std::string out_path;  // empty: stdout
};

inline int cmd_gen(const GenCmdOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const Instance inst = generate(o.spec);
    const std::string text = serialize_instance(inst);
    if (o.out_path.empty())
      out << text;
    else
      write_file(o.out_path, text);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// --- run -------------------------------------------------------------------

struct RunCmdOpts {
  std::string instance_path;
  PolicyKind policy = PolicyKind::kSrpt;
  RunOptions run;
  std::optional<int> machines_override;
  bool with_opt = false;
  OptBudget opt_budget;
  std::string trace_out;
  std::string summary_out;
};

namespace detail {

struct OptColumns {
  std::string opt;       // value or empty
  std::string opt_kind;  // exact | lower_bound | bound | empty
  std::string ratio;
};

inline OptColumns opt_columns(const Instance& inst, int completions,
                              const OptBudget& budget) {
  OptColumns c;
  int value = 0;
  if (static_cast<int>(inst.jobs.size()) <= budget.proof_cap) {
    const OptResult opt = opt_throughput(inst, inst.machines, budget);
    value = opt.best_count;
    c.opt_kind = opt.proven_optimal ? "exact" : "lower_bound";
  } else {
    value = throughput_upper_bound(inst, inst.machines);
    c.opt_kind = "bound";
  }
  c.opt = std::to_string(value);
  std::ostringstream r;
  if (value > 0)
    r << std::fixed << std::setprecision(6)
      << static_cast<double>(completions) / static_cast<double>(value);
  else
    r << std::fixed << std::setprecision(6) << 1.0;
  c.ratio = r.str();
  return c;
}

}  // namespace detail

inline int cmd_run(const RunCmdOpts& o, std::ostream& out, std::ostream& err) {
  try {
    Instance inst = parse_instance(read_file(o.instance_path));
    if (o.machines_override.has_value()) inst.machines = *o.machines_override;
    if (o.policy == PolicyKind::kFinal && inst.machines < 48)
      err << "warning: final composition with m=" << inst.machines
          << " is below the m >= 48 guarantee regime\n";
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_policy(inst, o.policy, o.run);
    const auto t1 = std::chrono::steady_clock::now();
    if (log_enabled())
      err << "[schedsim] policy=" << to_string(o.policy)
          << " n=" << inst.jobs.size() << " m=" << inst.machines
          << " intervals=" << r.trace.run_intervals.size() << " sim_ms="
          << std::chrono::duration<double, std::milli>(t1 - t0).count() << "\n";
    if (!o.trace_out.empty()) write_file(o.trace_out, serialize_trace(r.trace));
    const ValidationReport rep = verify_trace(inst, r.trace);
    if (!rep.ok) {
      err << report_to_json(rep);
      return 1;
    }
    json s;
    s["policy"] = to_string(o.policy);
    s["n"] = inst.jobs.size();
    s["machines"] = inst.machines;
    s["completions"] = r.stats.completions;
    if (r.stats.virtual_hi >= 0) {
      s["virtual_hi"] = r.stats.virtual_hi;
      s["virtual_srpt"] = r.stats.virtual_srpt;
      s["virtual_mlax"] = r.stats.virtual_mlax;
    }
    if (o.with_opt) {
      const detail::OptColumns c =
          detail::opt_columns(inst, r.stats.completions, o.opt_budget);
      s["opt"] = std::stoi(c.opt);
      s["opt_kind"] = c.opt_kind;
      s["ratio"] = std::stod(c.ratio);
    }
    const std::string line = s.dump() + "\n";
    out << line;
    if (!o.summary_out.empty()) write_file(o.summary_out, line);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// --- sweep -----------------------------------------------------------------

struct SweepCmdOpts {
  GenSpec base;  // kind, n, horizon, size/ratio ranges; seed/m overridden per cell
  std::vector<int> machines{8};
  std::vector<Tick> alphas{24};
  std::uint64_t seed0 = 0;
  int num_seeds = 1;
  std::vector<PolicyKind> policies{PolicyKind::kSrpt};
  bool with_opt = false;
  OptBudget opt_budget;
  int workers = 1;
  std::string out_csv;  // empty: stdout
};

inline const char* kSweepCsvHeader =
    "seed,m,alpha,policy,n,completions,virtual_hi,virtual_srpt,virtual_mlax,"
    "opt,opt_kind,ratio,pushes,replaces,completion_pops,infeasible_pops,pops,"
    "status,error";

inline int cmd_sweep(const SweepCmdOpts& o, std::ostream& out, std::ostream& err) {
  try {
    struct Cell {
      std::uint64_t seed;
      int m;
      Tick alpha;
      PolicyKind policy;
    };
    std::vector<Cell> cells;
    for (int s = 0; s < o.num_seeds; ++s)
      for (int m : o.machines)
        for (Tick a : o.alphas)
          for (PolicyKind p : o.policies)
            cells.push_back({o.seed0 + static_cast<std::uint64_t>(s), m, a, p});

    std::vector<std::string> rows(cells.size());
    std::vector<double> ratios(cells.size(), -1.0);
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        const Cell& c = cells[i];
        std::ostringstream row;
        row << c.seed << "," << c.m << "," << c.alpha << ","
            << to_string(c.policy) << ",";
        try {
          GenSpec spec = o.base;
          spec.seed = c.seed;
          spec.m = c.m;
          const Instance inst = generate(spec);
          if (c.policy == PolicyKind::kFinal && c.m < 3)
            throw ConfigError("final composition needs at least 3 machines");
          RunOptions ro;
          ro.alpha = c.alpha;
          const RunResult r = run_policy(inst, c.policy, ro);
          const ValidationReport rep = verify_trace(inst, r.trace);
          if (!rep.ok)
            throw ValidationError("trace failed validation: " +
                                  rep.violations.front().rule);
          row << inst.jobs.size() << "," << r.stats.completions << ",";
          if (r.stats.virtual_hi >= 0)
            row << r.stats.virtual_hi << "," << r.stats.virtual_srpt << ","
                << r.stats.virtual_mlax << ",";
          else
            row << ",,,";
          if (o.with_opt) {
            const detail::OptColumns oc =
                detail::opt_columns(inst, r.stats.completions, o.opt_budget);
            row << oc.opt << "," << oc.opt_kind << "," << oc.ratio << ",";
            ratios[i] = std::stod(oc.ratio);
          } else {
            row << ",,,";
          }
          row << r.stats.pushes << "," << r.stats.replaces << ","
              << r.stats.completion_pops << "," << r.stats.infeasible_pops << ","
              << (r.stats.completion_pops + r.stats.infeasible_pops) << ",ok,";
        } catch (const std::exception& e) {
          std::string what = e.what();
          for (char& ch : what)
            if (ch == ',' || ch == '\n') ch = ';';
          row << ",,,,,,,,,,,,,error," << what;
        }
        rows[i] = row.str();
      }
    };
    std::vector<std::thread> pool;
    const int workers = std::max(1, o.workers);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << kSweepCsvHeader << "\n";
    for (const std::string& r : rows) csv << r << "\n";
    double min_ratio = -1.0, sum = 0.0;
    int cnt = 0;
    for (double x : ratios) {
      if (x < 0) continue;
      min_ratio = (cnt == 0) ? x : std::min(min_ratio, x);
      sum += x;
      ++cnt;
    }
    if (cnt > 0) {
      csv << "# min_ratio=" << std::fixed << std::setprecision(6) << min_ratio
          << "\n";
      csv << "# mean_ratio=" << std::fixed << std::setprecision(6)
          << (sum / cnt) << "\n";
    }
    if (o.out_csv.empty())
      out << csv.str();
    else
      write_file(o.out_csv, csv.str());
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// --- opt -------------------------------------------------------------------

struct OptCmdOpts {
  std::string instance_path;
  std::optional<int> machines_override;
  OptBudget budget;
  std::string out_path;
};

inline int cmd_opt(const OptCmdOpts& o, std::ostream& out, std::ostream& err) {
  try {
    Instance inst = parse_instance(read_file(o.instance_path));
    if (o.machines_override.has_value()) inst.machines = *o.machines_override;
    const OptResult res = opt_throughput(inst, inst.machines, o.budget);
    const std::string text = opt_to_json(res);
    if (o.out_path.empty())
      out << text;
    else
      write_file(o.out_path, text);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// --- validate ---------------------------------------------------------------

struct ValidateCmdOpts {
  std::string instance_path;
  std::string trace_path;
  std::string out_path;
};

inline int cmd_validate(const ValidateCmdOpts& o, std::ostream& out,
                        std::ostream& err) {
  try {
    const Instance inst = parse_instance(read_file(o.instance_path));
    const Trace trace = parse_trace(read_file(o.trace_path));
    ValidationReport rep;
    if (trace.header.instance_hash != instance_hash(inst))
      rep.add("instance-hash", 0, "trace was produced from a different instance");
    const ValidationReport inner = verify_trace(inst, trace);
    for (const Violation& v : inner.violations) rep.add(v.rule, v.time, v.detail);
    rep.stats = inner.stats;
    const std::string text = report_to_json(rep);
    if (o.out_path.empty())
      out << text;
    else
      write_file(o.out_path, text);
    return rep.ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// --- gantt -----------------------------------------------------------------

struct GanttCmdOpts {
  std::string trace_path;
  std::string out_path;
};

inline int cmd_gantt(const GanttCmdOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const Trace trace = parse_trace(read_file(o.trace_path));
    const std::string svg = gantt_svg(trace);
    if (o.out_path.empty())
      out << svg;
    else
      write_file(o.out_path, svg);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace schedsim::cli
