#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy.hpp"
#include "schedsim/trace.hpp"

namespace schedsim {

struct EngineConfig {
  // Extra boundary times with no attached event. A correct policy must
  // produce an identical trace with or without them; tests rely on this.
  std::vector<Tick> probe_times;
};

/// Earliest upcoming event: next release, earliest predicted completion of a
/// running job (now + remaining), or the policy's next registered wake time.
inline std::optional<Tick> next_event_time(Tick now,
                                           std::optional<Tick> next_release,
                                           std::span<const Tick> running_remaining,
                                           std::optional<Tick> policy_wake) {
  std::optional<Tick> best;
  const auto consider = [&best](std::optional<Tick> c) {
    if (c.has_value() && (!best.has_value() || *c < *best)) best = c;
  };
  consider(next_release);
  for (Tick r : running_remaining) consider(now + r);
  consider(policy_wake);
  return best;
}

namespace detail {

inline void check_run_set(const std::vector<RunEntry>& rs, int machines,
                          const std::vector<JobState>& states, Tick t) {
  if (static_cast<int>(rs.size()) > machines)
    throw PolicyViolation("run set exceeds machine count");
  std::vector<char> mach_used(static_cast<std::size_t>(machines), 0);
  std::vector<int> jobs;
  for (const RunEntry& e : rs) {
    if (e.machine < 0 || e.machine >= machines)
      throw PolicyViolation("machine index out of range: " + std::to_string(e.machine));
    if (mach_used[static_cast<std::size_t>(e.machine)])
      throw PolicyViolation("machine assigned twice: " + std::to_string(e.machine));
    mach_used[static_cast<std::size_t>(e.machine)] = 1;
    if (e.job < 0 || static_cast<std::size_t>(e.job) >= states.size())
      throw PolicyViolation("unknown job id: " + std::to_string(e.job));
    const JobState& s = states[static_cast<std::size_t>(e.job)];
    if (s.job.release > t)
      throw PolicyViolation("job " + std::to_string(e.job) + " not yet released");
    if (s.remaining <= 0)
      throw PolicyViolation("job " + std::to_string(e.job) + " is exhausted");
    jobs.push_back(e.job);
  }
  std::sort(jobs.begin(), jobs.end());
  if (std::adjacent_find(jobs.begin(), jobs.end()) != jobs.end())
    throw PolicyViolation("job scheduled on two machines at once");
}

}  // namespace detail

/// Deterministic event-driven simulation. Between consecutive boundaries the
/// run set is constant and running jobs are processed at unit rate; the
/// policy is re-queried only at boundaries (releases, completions, policy
/// wake times, probes).
inline Trace simulate(const Instance& inst, Policy& policy,
                      const EngineConfig& cfg = {}) {
  const int m = policy.machine_count();
  if (m > inst.machines)
    throw ConfigError("policy wants more machines than the instance has");

  Trace trace;
  trace.header.instance_hash = instance_hash(inst);
  trace.header.machines = inst.machines;
  trace.header.tick_scale = inst.tick_scale;
  policy.attach_trace(&trace);

  const std::size_t n = inst.jobs.size();
  std::vector<JobState> states;
  states.reserve(n);
  for (const Job& j : inst.jobs) states.push_back({j, j.size, std::nullopt});

  std::vector<int> release_order(n);
  for (std::size_t i = 0; i < n; ++i) release_order[i] = static_cast<int>(i);
  std::sort(release_order.begin(), release_order.end(), [&](int a, int b) {
    const Job& ja = inst.jobs[static_cast<std::size_t>(a)];
    const Job& jb = inst.jobs[static_cast<std::size_t>(b)];
    return ja.release != jb.release ? ja.release < jb.release : ja.id < jb.id;
  });
  std::size_t next_rel = 0;

  std::vector<Tick> probes = cfg.probe_times;
  std::sort(probes.begin(), probes.end());
  probes.erase(probes.begin(),
               std::lower_bound(probes.begin(), probes.end(), Tick{0}));
  std::size_t next_probe = 0;

  std::vector<RunEntry> assignment;
  std::vector<int> open_job(static_cast<std::size_t>(m), -1);
  std::vector<Tick> open_start(static_cast<std::size_t>(m), 0);
  std::vector<Tick> remaining_buf;

  Tick now = 0;
  bool started = false;
  const std::uint64_t max_boundaries =
      50 * (static_cast<std::uint64_t>(n) + 2) + 2 * probes.size() + 1000;
  std::uint64_t boundaries = 0;

  for (;;) {
    std::optional<Tick> nr;
    if (next_rel < n)
      nr = inst.jobs[static_cast<std::size_t>(release_order[next_rel])].release;
    remaining_buf.clear();
    for (const RunEntry& e : assignment)
      remaining_buf.push_back(states[static_cast<std::size_t>(e.job)].remaining);
    std::optional<Tick> wake = policy.next_wake_time();
    if (wake.has_value() && started && *wake <= now)
      throw PolicyViolation("policy registered a stale wake time");
    std::optional<Tick> probe;
    while (next_probe < probes.size() && started && probes[next_probe] <= now)
      ++next_probe;
    if (next_probe < probes.size()) probe = probes[next_probe];

    std::optional<Tick> t_next = next_event_time(now, nr, remaining_buf, wake);
    if (probe.has_value() && (!t_next.has_value() || *probe < *t_next))
      t_next = probe;
    if (!t_next.has_value()) break;
    if (++boundaries > max_boundaries)
      throw PolicyViolation("event budget exceeded; runaway policy wake loop?");

    const Tick t = *t_next;
    const Tick dt = started ? t - now : t;
    for (const RunEntry& e : assignment) {
      JobState& s = states[static_cast<std::size_t>(e.job)];
      s.remaining -= dt;
    }
    policy.advance_to(t);

    std::vector<int> done;
    for (const RunEntry& e : assignment) {
      const JobState& s = states[static_cast<std::size_t>(e.job)];
      if (s.remaining == 0 && !s.completed_at.has_value()) done.push_back(e.job);
    }
    std::sort(done.begin(), done.end());
    for (int j : done) {
      states[static_cast<std::size_t>(j)].completed_at = t;
      trace.add_completion(j, t);
      policy.on_completion(j, t);
    }

    while (next_rel < n) {
      const Job& j = inst.jobs[static_cast<std::size_t>(release_order[next_rel])];
      if (j.release != t) break;
      policy.on_release(j, t);
      ++next_rel;
    }

    policy.on_tick_boundary(t);

    std::vector<RunEntry> rs = policy.run_set(t);
    detail::check_run_set(rs, m, states, t);
    std::sort(rs.begin(), rs.end(),
              [](const RunEntry& a, const RunEntry& b) { return a.machine < b.machine; });

    std::vector<int> new_job(static_cast<std::size_t>(m), -1);
    for (const RunEntry& e : rs) new_job[static_cast<std::size_t>(e.machine)] = e.job;
    for (int mach = 0; mach < m; ++mach) {
      const std::size_t mi = static_cast<std::size_t>(mach);
      if (open_job[mi] == new_job[mi]) continue;
      if (open_job[mi] >= 0)
        trace.add_interval(mach, open_job[mi], open_start[mi], t);
      open_job[mi] = new_job[mi];
      open_start[mi] = t;
    }

    assignment = std::move(rs);
    now = t;
    started = true;
  }

  for (int mach = 0; mach < m; ++mach) {
    const std::size_t mi = static_cast<std::size_t>(mach);
    if (open_job[mi] >= 0)
      throw PolicyViolation("simulation ended with a job still running");
  }

  policy.attach_trace(nullptr);
  return trace;
}

}  // namespace schedsim
