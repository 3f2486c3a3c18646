#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schedsim/config.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy_mlax.hpp"
#include "schedsim/trace.hpp"

namespace schedsim {

struct Violation {
  std::string rule;
  Tick time = 0;
  std::string detail;
};

struct StackCounters {
  int pushes = 0;
  int replaces = 0;
  int completion_pops = 0;
  int infeasible_pops = 0;
  int pseudo_releases = 0;
  int window_expiries = 0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  StackCounters stats;

  void add(std::string rule, Tick time, std::string detail) {
    ok = false;
    violations.push_back({std::move(rule), time, std::move(detail)});
  }
};

/// Physical schedule validity, purely from the serialized trace: interval
/// sanity, per-machine disjointness, no job on two machines at once, no work
/// before release or after completion, completed jobs got exactly their size
/// and finished by their deadline.
inline ValidationReport validate_trace(const Instance& inst, const Trace& trace,
                                       int m) {
  ValidationReport rep;
  const auto job_name = [](int j) { return "job " + std::to_string(j); };
  const std::size_t n = inst.jobs.size();

  for (const RunInterval& iv : trace.run_intervals) {
    if (iv.machine < 0 || iv.machine >= m)
      rep.add("bad-machine", iv.start, "machine " + std::to_string(iv.machine));
    if (iv.job < 0 || static_cast<std::size_t>(iv.job) >= n) {
      rep.add("bad-job", iv.start, job_name(iv.job));
      continue;
    }
    if (iv.end <= iv.start)
      rep.add("empty-interval", iv.start, job_name(iv.job));
    if (iv.start < inst.jobs[static_cast<std::size_t>(iv.job)].release)
      rep.add("before-release", iv.start, job_name(iv.job));
  }

  std::map<int, std::vector<RunInterval>> by_machine;
  std::map<int, std::vector<RunInterval>> by_job;
  for (const RunInterval& iv : trace.run_intervals) {
    by_machine[iv.machine].push_back(iv);
    if (iv.job >= 0 && static_cast<std::size_t>(iv.job) < n)
      by_job[iv.job].push_back(iv);
  }
  const auto sorted_by_start = [](std::vector<RunInterval>& v) {
    std::sort(v.begin(), v.end(), [](const RunInterval& a, const RunInterval& b) {
      return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
  };
  for (auto& [mach, ivs] : by_machine) {
    sorted_by_start(ivs);
    for (std::size_t i = 1; i < ivs.size(); ++i)
      if (ivs[i].start < ivs[i - 1].end)
        rep.add("machine-overlap", ivs[i].start,
                "machine " + std::to_string(mach) + ": " + job_name(ivs[i].job) +
                    " vs " + job_name(ivs[i - 1].job));
  }
  for (auto& [job, ivs] : by_job) {
    sorted_by_start(ivs);
    for (std::size_t i = 1; i < ivs.size(); ++i)
      if (ivs[i].start < ivs[i - 1].end)
        rep.add("job-overlap", ivs[i].start, job_name(job));
  }

  std::map<int, Tick> processed;
  for (const RunInterval& iv : trace.run_intervals)
    if (iv.job >= 0 && static_cast<std::size_t>(iv.job) < n && iv.end > iv.start)
      processed[iv.job] += iv.end - iv.start;

  std::map<int, Tick> completed_at;
  for (const CompletionRec& c : trace.completions) {
    if (c.job < 0 || static_cast<std::size_t>(c.job) >= n) {
      rep.add("bad-job", c.time, "completion of " + job_name(c.job));
      continue;
    }
    if (!completed_at.emplace(c.job, c.time).second)
      rep.add("double-completion", c.time, job_name(c.job));
  }
  for (const auto& [job, t] : completed_at) {
    const Job& j = inst.jobs[static_cast<std::size_t>(job)];
    if (processed[job] != j.size)
      rep.add("completion-length", t,
              job_name(job) + " got " + std::to_string(processed[job]) +
                  " of " + std::to_string(j.size));
    if (t > j.deadline) rep.add("late-completion", t, job_name(job));
    for (const RunInterval& iv : by_job[job])
      if (iv.end > t) rep.add("run-after-completion", iv.start, job_name(job));
  }
  for (const auto& [job, total] : processed)
    if (total > inst.jobs[static_cast<std::size_t>(job)].size)
      rep.add("overprocessed", 0, job_name(job));
  return rep;
}

/// Laminarity of one machine's schedule: with f/c the first/last run times
/// per job on this machine, no job may run strictly inside the (f, c) span of
/// a job that started later.
inline bool is_forest_schedule(const Trace& trace, int machine) {
  struct Span {
    Tick f = 0, c = 0;
    std::vector<std::pair<Tick, Tick>> runs;
  };
  std::map<int, Span> spans;
  for (const RunInterval& iv : trace.run_intervals) {
    if (iv.machine != machine) continue;
    auto [it, fresh] = spans.emplace(iv.job, Span{iv.start, iv.end, {}});
    if (!fresh) {
      it->second.f = std::min(it->second.f, iv.start);
      it->second.c = std::max(it->second.c, iv.end);
    }
    it->second.runs.push_back({iv.start, iv.end});
  }
  // c_j is the last time the job runs, i.e. the start of its final unit of
  // work rather than the interval end; with exclusive interval ends the open
  // preemption window is (f_j', c_j') with c_j' the last interval's end.
  for (const auto& [j, sj] : spans) {
    for (const auto& [k, sk] : spans) {
      if (j == k || !(sj.f < sk.f)) continue;
      for (const auto& [s, e] : sj.runs)
        if (s < sk.c && e > sk.f) return false;
    }
  }
  return true;
}

struct StackAccounting {
  StackCounters counters;
  std::optional<std::string> violation;

  bool balanced() const { return !violation.has_value(); }
};

/// Push/pop bookkeeping identity over a stack-policy trace: every stack
/// starts and ends empty and only pushes and pops change its size, so
/// pushes == completion_pops + infeasible_pops, with replacements counted
/// as neither.
inline StackAccounting stack_accounting(const Trace& trace) {
  StackAccounting acc;
  std::map<int, int> per_stack;
  for (const StackEvent& ev : trace.stack_events) {
    switch (ev.kind) {
      case StackEventKind::kPush:
        ++acc.counters.pushes;
        ++per_stack[ev.stack];
        break;
      case StackEventKind::kReplace:
        ++acc.counters.replaces;
        break;
      case StackEventKind::kCompletionPop:
        ++acc.counters.completion_pops;
        --per_stack[ev.stack];
        break;
      case StackEventKind::kInfeasiblePop:
        ++acc.counters.infeasible_pops;
        --per_stack[ev.stack];
        break;
      case StackEventKind::kPseudoRelease:
        ++acc.counters.pseudo_releases;
        break;
      case StackEventKind::kWindowExpiry:
        ++acc.counters.window_expiries;
        break;
    }
  }
  for (const auto& [stack, delta] : per_stack) {
    if (delta != 0 && !acc.violation.has_value())
      acc.violation = "stack " + std::to_string(stack) + " unbalanced by " +
                      std::to_string(delta);
  }
  if (acc.counters.pushes !=
          acc.counters.completion_pops + acc.counters.infeasible_pops &&
      !acc.violation.has_value())
    acc.violation = "pushes != completion_pops + infeasible_pops";
  return acc;
}

struct ReplayOptions {
  // For standalone stack-policy traces, additionally require that machine i's
  // run intervals coincide exactly with the periods job j was top of stack i.
  bool check_machine_binding = false;
  // In a composed trace only the low-laxity substream reaches the stacks;
  // other jobs are not pending candidates.
  bool low_laxity_only = false;
};

/// Re-derive the whole stack timeline from the serialized events and check
/// every rule precondition at its recorded instant: window containment and
/// the viability quorum at pseudo-releases, the push adjacency condition, the
/// replace quorum and minimum-laxity selection, and that pops removed exactly
/// a completed top / an infeasible top. Works on both standalone traces and
/// composed ones (where run intervals are physical but the stack timeline is
/// the policy's own view).
inline ValidationReport mlax_replay(const Instance& inst, const Trace& trace,
                                    int num_stacks,
                                    const ReplayOptions& opts = {}) {
  ValidationReport rep;
  const MlaxConfig& cfg = trace.header.mlax;
  const std::size_t n = inst.jobs.size();
  if (num_stacks <= 0) {
    rep.add("replay-config", 0, "no stacks");
    return rep;
  }

  std::vector<StackEvent> events = trace.stack_events;
  std::sort(events.begin(), events.end(),
            [](const StackEvent& a, const StackEvent& b) { return a.seq < b.seq; });

  std::vector<std::vector<int>> stacks(static_cast<std::size_t>(num_stacks));
  std::vector<Tick> remaining(n), lax(n), size(n), deadline(n), release(n);
  for (const Job& j : inst.jobs) {
    const std::size_t i = static_cast<std::size_t>(j.id);
    remaining[i] = j.size;
    lax[i] = laxity(j);
    size[i] = j.size;
    deadline[i] = j.deadline;
    release[i] = j.release;
  }
  std::vector<Tick> pseudo_released_at(n, -1);
  std::vector<char> ever_stacked(n, 0);
  std::vector<char> expired(n, 0);

  struct TopSegment {
    int stack, job;
    Tick from, to;
  };
  std::vector<TopSegment> segments;
  Tick now = 0;

  const auto top_lax = [&](int i) {
    const auto& st = stacks[static_cast<std::size_t>(i)];
    return st.empty() ? kInfTick : lax[static_cast<std::size_t>(st.back())];
  };
  const auto second_lax = [&](int i) {
    const auto& st = stacks[static_cast<std::size_t>(i)];
    return st.size() < 2 ? kInfTick
                         : lax[static_cast<std::size_t>(st[st.size() - 2])];
  };
  const auto advance = [&](Tick t) {
    for (int i = 0; i < num_stacks; ++i) {
      const auto& st = stacks[static_cast<std::size_t>(i)];
      if (st.empty()) continue;
      if (t > now) {
        remaining[static_cast<std::size_t>(st.back())] -= t - now;
        segments.push_back({i, st.back(), now, t});
      }
    }
    now = t;
  };
  const auto bad_job = [&](int j) {
    return j < 0 || static_cast<std::size_t>(j) >= n;
  };

  // Pseudo-release times must be the earliest viable instant. Viability only
  // depends on the stack tops' (static) sizes, so it is constant between
  // stack events; right before each event, no pending job released earlier
  // and still inside its window may pass the quorum.
  std::vector<Tick> theta_buf;
  const auto earliest_check = [&](Tick t) {
    theta_buf.clear();
    for (int i = 0; i < num_stacks; ++i) {
      const auto& st = stacks[static_cast<std::size_t>(i)];
      theta_buf.push_back(
          st.empty() ? kInfTick
                     : cfg.alpha * size[static_cast<std::size_t>(st.back())]);
    }
    const int k = ceil_fraction(cfg.viability_fraction, num_stacks);
    std::nth_element(theta_buf.begin(), theta_buf.begin() + (k - 1),
                     theta_buf.end(), std::greater<Tick>());
    const Tick theta = theta_buf[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < n; ++j) {
      if (pseudo_released_at[j] >= 0 || expired[j]) continue;
      if (opts.low_laxity_only && lax[j] > size[j]) continue;
      if (release[j] >= t || release[j] + lax[j] / 2 < t) continue;
      if (lax[j] <= theta)
        rep.add("missed-pseudo-release", t,
                "job " + std::to_string(j) +
                    " was viable before this instant but never resolved");
    }
  };

  for (const StackEvent& ev : events) {
    if (ev.time < now) {
      rep.add("replay-order", ev.time, "events move backwards in time");
      return rep;
    }
    if (ev.time > now) earliest_check(ev.time);
    if (bad_job(ev.job)) {
      rep.add("bad-job", ev.time, "stack event names job " + std::to_string(ev.job));
      return rep;
    }
    advance(ev.time);
    const std::size_t j = static_cast<std::size_t>(ev.job);
    const Tick t = ev.time;
    const std::string jn = "job " + std::to_string(ev.job);
    switch (ev.kind) {
      case StackEventKind::kPseudoRelease: {
        if (pseudo_released_at[j] >= 0)
          rep.add("double-pseudo-release", t, jn);
        pseudo_released_at[j] = t;
        if (t < release[j] || t > release[j] + lax[j] / 2)
          rep.add("window-containment", t,
                  jn + " outside [r, r + laxity/2] = [" +
                      std::to_string(release[j]) + ", " +
                      std::to_string(release[j] + lax[j] / 2) + "]");
        int quorum = 0;
        for (int i = 0; i < num_stacks; ++i) {
          const auto& st = stacks[static_cast<std::size_t>(i)];
          const Tick v = st.empty()
                             ? kInfTick
                             : cfg.alpha * size[static_cast<std::size_t>(st.back())];
          if (v >= lax[j]) ++quorum;
        }
        if (quorum < ceil_fraction(cfg.viability_fraction, num_stacks))
          rep.add("viability-quorum", t,
                  jn + " saw only " + std::to_string(quorum) + " qualifying tops");
        break;
      }
      case StackEventKind::kPush: {
        if (pseudo_released_at[j] != t)
          rep.add("push-without-pseudo-release", t, jn);
        if (ev.stack < 0 || ev.stack >= num_stacks) {
          rep.add("bad-stack", t, jn);
          break;
        }
        if (cfg.alpha * size[j] > top_lax(ev.stack))
          rep.add("push-adjacency", t,
                  jn + ": alpha*x exceeds laxity of stack top");
        if (cfg.variant == MlaxVariant::kLaxVariant &&
            !strictly_half_lax(deadline[j], remaining[j], lax[j], t))
          rep.add("strict-feasibility", t, jn);
        stacks[static_cast<std::size_t>(ev.stack)].push_back(ev.job);
        ever_stacked[j] = 1;
        break;
      }
      case StackEventKind::kReplace: {
        if (pseudo_released_at[j] != t)
          rep.add("replace-without-pseudo-release", t, jn);
        if (ev.stack < 0 || ev.stack >= num_stacks) {
          rep.add("bad-stack", t, jn);
          break;
        }
        auto& st = stacks[static_cast<std::size_t>(ev.stack)];
        if (st.empty() || st.back() != ev.evicted) {
          rep.add("replace-top-mismatch", t, jn);
          break;
        }
        if (cfg.variant == MlaxVariant::kMlax) {
          int quorum = 0;
          for (int i = 0; i < num_stacks; ++i)
            if (cfg.alpha * size[j] <= second_lax(i)) ++quorum;
          if (quorum < ceil_fraction(cfg.replace_fraction, num_stacks))
            rep.add("replace-quorum", t, jn);
        }
        if (cfg.alpha * size[j] > second_lax(ev.stack))
          rep.add("replace-second-top", t, jn);
        const Tick evicted_lax = top_lax(ev.stack);
        if (evicted_lax >= lax[j]) rep.add("replace-laxity-gain", t, jn);
        Tick min_lax = kInfTick;
        for (int i = 0; i < num_stacks; ++i)
          if (cfg.alpha * size[j] <= second_lax(i) && top_lax(i) < lax[j])
            min_lax = std::min(min_lax, top_lax(i));
        if (evicted_lax != min_lax)
          rep.add("replace-not-minimum", t,
                  jn + " evicted laxity " + std::to_string(evicted_lax) +
                      " but minimum is " + std::to_string(min_lax));
        st.back() = ev.job;
        ever_stacked[j] = 1;
        break;
      }
      case StackEventKind::kCompletionPop:
      case StackEventKind::kInfeasiblePop: {
        if (ev.stack < 0 || ev.stack >= num_stacks) {
          rep.add("bad-stack", t, jn);
          break;
        }
        auto& st = stacks[static_cast<std::size_t>(ev.stack)];
        if (st.empty() || st.back() != ev.job) {
          rep.add("pop-top-mismatch", t, jn);
          break;
        }
        if (ev.kind == StackEventKind::kCompletionPop) {
          if (remaining[j] != 0)
            rep.add("completion-pop-unfinished", t,
                    jn + " still has " + std::to_string(remaining[j]));
        } else {
          if (remaining[j] <= 0 || t + remaining[j] <= deadline[j])
            rep.add("infeasible-pop-feasible", t, jn);
        }
        st.pop_back();
        break;
      }
      case StackEventKind::kWindowExpiry: {
        if (t != release[j] + lax[j] / 2)
          rep.add("expiry-time", t, jn);
        if (pseudo_released_at[j] >= 0 || ever_stacked[j])
          rep.add("expiry-after-resolution", t, jn);
        expired[j] = 1;
        break;
      }
    }
  }

  // Every pending job resolves exactly once: a pseudo-release inside the
  // window or an expiry at its end. A trace that silently drops a job would
  // otherwise evade the earliest-instant check above.
  for (std::size_t j = 0; j < n; ++j) {
    if (opts.low_laxity_only && lax[j] > size[j]) continue;
    if (pseudo_released_at[j] < 0 && !expired[j])
      rep.add("unresolved-pending", 0,
              "job " + std::to_string(j) + " neither pseudo-released nor expired");
  }

  if (opts.check_machine_binding) {
    // Merge contiguous top segments and compare with the recorded intervals.
    std::vector<TopSegment> merged;
    std::sort(segments.begin(), segments.end(),
              [](const TopSegment& a, const TopSegment& b) {
                if (a.stack != b.stack) return a.stack < b.stack;
                return a.from < b.from;
              });
    for (const TopSegment& s : segments) {
      if (!merged.empty() && merged.back().stack == s.stack &&
          merged.back().job == s.job && merged.back().to == s.from) {
        merged.back().to = s.to;
      } else {
        merged.push_back(s);
      }
    }
    std::vector<TopSegment> actual;
    for (const RunInterval& iv : trace.run_intervals)
      actual.push_back({iv.machine, iv.job, iv.start, iv.end});
    std::sort(actual.begin(), actual.end(),
              [](const TopSegment& a, const TopSegment& b) {
                if (a.stack != b.stack) return a.stack < b.stack;
                return a.from < b.from;
              });
    bool same = merged.size() == actual.size();
    for (std::size_t i = 0; same && i < merged.size(); ++i)
      same = merged[i].stack == actual[i].stack && merged[i].job == actual[i].job &&
             merged[i].from == actual[i].from && merged[i].to == actual[i].to;
    if (!same)
      rep.add("machine-binding", 0,
              "run intervals differ from the stack-top timeline");
  }

  rep.stats = stack_accounting(trace).counters;
  return rep;
}

}  // namespace schedsim
