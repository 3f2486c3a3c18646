#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schedsim/errors.hpp"

namespace schedsim {

// All simulation time lives on a signed 64-bit integer tick grid. Ingestion
// doubles every input value so that half-laxity window ends land on exact
// ticks; see make_instance.
using Tick = std::int64_t;

inline constexpr Tick kInfTick = std::numeric_limits<Tick>::max();

// Input values (release, size, deadline) must stay below this bound so that
// doubling and alpha-scaled products never overflow.
inline constexpr Tick kMaxInputTick = Tick{1} << 40;

struct Job {
  int id = 0;
  Tick release = 0;
  Tick size = 0;
  Tick deadline = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Slack of a job: the total time it can be left unprocessed and still finish.
inline Tick laxity(const Job& j) { return (j.deadline - j.release) - j.size; }

inline bool is_high_laxity(const Job& j) { return laxity(j) > j.size; }

struct JobState {
  Job job;
  Tick remaining = 0;
  std::optional<Tick> completed_at;
};

/// A job is feasible at time t if it still has work left and can finish by
/// its deadline when run continuously from t.
inline bool is_feasible(const JobState& s, Tick t) {
  return s.remaining > 0 && t + s.remaining <= s.job.deadline;
}

inline bool is_feasible(Tick remaining, Tick deadline, Tick t) {
  return remaining > 0 && t + remaining <= deadline;
}

struct Instance {
  std::vector<Job> jobs;
  int machines = 1;
  std::string label;
  std::optional<std::uint64_t> seed;
  // 1 for raw tick values, 2 once ingestion has doubled the input grid.
  int tick_scale = 1;
};

/// Partition jobs into (J_hi, J_lo): laxity > size goes high, laxity <= size
/// (including the boundary) goes low.
inline std::pair<std::vector<Job>, std::vector<Job>> classify_laxity(
    const std::vector<Job>& jobs) {
  std::pair<std::vector<Job>, std::vector<Job>> out;
  for (const Job& j : jobs) {
    (is_high_laxity(j) ? out.first : out.second).push_back(j);
  }
  return out;
}

/// Validate raw jobs and build an Instance on the doubled tick grid.
///
/// Rejects (with a diagnostic naming the job) jobs that can never complete
/// (release + size > deadline), non-positive sizes, negative times, ids that
/// are not exactly 0..n-1, and values large enough to overflow the doubled
/// grid.
inline Instance make_instance(std::vector<Job> jobs, int machines,
                              std::string label = {},
                              std::optional<std::uint64_t> seed = {}) {
  if (machines < 1) throw ValidationError("machine count must be positive");
  std::vector<char> seen(jobs.size(), 0);
  Tick total_work = 0;
  for (const Job& j : jobs) {
    const std::string tag = "job " + std::to_string(j.id) + ": ";
    if (j.id < 0 || static_cast<std::size_t>(j.id) >= jobs.size())
      throw ValidationError(tag + "ids must be dense 0..n-1");
    if (seen[static_cast<std::size_t>(j.id)])
      throw ValidationError(tag + "duplicate id");
    seen[static_cast<std::size_t>(j.id)] = 1;
    if (j.release < 0) throw ValidationError(tag + "negative release");
    if (j.size <= 0) throw ValidationError(tag + "size must be positive");
    if (j.deadline > kMaxInputTick || j.size > kMaxInputTick)
      throw ValidationError(tag + "value exceeds supported tick range");
    if (j.release + j.size > j.deadline)
      throw ValidationError(tag + "release + size > deadline, can never complete");
    total_work += j.size;
    if (total_work > kMaxInputTick)
      throw ValidationError("total work exceeds the supported tick range");
  }
  Instance inst;
  inst.jobs = std::move(jobs);
  for (Job& j : inst.jobs) {
    j.release *= 2;
    j.size *= 2;
    j.deadline *= 2;
  }
  inst.machines = machines;
  inst.label = std::move(label);
  inst.seed = seed;
  inst.tick_scale = 2;
  return inst;
}

/// Build an Instance from already-internal tick values (no doubling).
/// Intended for fixtures; the same invariants apply.
inline Instance make_raw_instance(std::vector<Job> jobs, int machines) {
  if (machines < 1) throw ValidationError("machine count must be positive");
  Instance inst;
  inst.jobs = std::move(jobs);
  inst.machines = machines;
  inst.tick_scale = 1;
  return inst;
}

}  // namespace schedsim
