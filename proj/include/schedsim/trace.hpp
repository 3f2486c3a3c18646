#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schedsim/config.hpp"
#include "schedsim/job.hpp"

namespace schedsim {

enum class StackEventKind {
  kPseudoRelease,
  kPush,
  kReplace,
  kCompletionPop,
  kInfeasiblePop,
  kWindowExpiry,
};

inline const char* to_string(StackEventKind k) {
  switch (k) {
    case StackEventKind::kPseudoRelease: return "pseudo_release";
    case StackEventKind::kPush: return "push";
    case StackEventKind::kReplace: return "replace";
    case StackEventKind::kCompletionPop: return "completion_pop";
    case StackEventKind::kInfeasiblePop: return "infeasible_pop";
    case StackEventKind::kWindowExpiry: return "window_expiry";
  }
  return "?";
}

struct RunInterval {
  int machine = 0;
  int job = 0;
  Tick start = 0;
  Tick end = 0;
  std::uint64_t seq = 0;

  friend bool operator==(const RunInterval&, const RunInterval&) = default;
};

struct CompletionRec {
  int job = 0;
  Tick time = 0;
  std::uint64_t seq = 0;

  friend bool operator==(const CompletionRec&, const CompletionRec&) = default;
};

struct StackEvent {
  StackEventKind kind = StackEventKind::kPush;
  Tick time = 0;
  int job = 0;
  int stack = -1;       // machine-bound stack index, -1 when not applicable
  int evicted = -1;     // replaced-out job for kReplace
  std::uint64_t seq = 0;

  friend bool operator==(const StackEvent&, const StackEvent&) = default;
};

struct TraceHeader {
  std::uint64_t instance_hash = 0;
  int machines = 0;
  int tick_scale = 1;
  std::string policy;
  MlaxConfig mlax;  // meaningful for mlax/lax_variant/final traces

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

/// Full timeline of one simulation: run intervals per machine, completions,
/// and the policy's stack events. `seq` is a global emission counter; it is
/// the only reliable ordering for same-instant stack operations.
struct Trace {
  TraceHeader header;
  std::vector<RunInterval> run_intervals;
  std::vector<CompletionRec> completions;
  std::vector<StackEvent> stack_events;

  std::uint64_t next_seq = 0;

  void add_interval(int machine, int job, Tick start, Tick end) {
    run_intervals.push_back({machine, job, start, end, next_seq++});
  }
  void add_completion(int job, Tick t) {
    completions.push_back({job, t, next_seq++});
  }
  void add_stack_event(StackEventKind kind, Tick t, int job, int stack = -1,
                       int evicted = -1) {
    stack_events.push_back({kind, t, job, stack, evicted, next_seq++});
  }

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.header == b.header && a.run_intervals == b.run_intervals &&
           a.completions == b.completions && a.stack_events == b.stack_events;
  }
};

/// Stable 64-bit content hash of an instance (FNV-1a over the field values).
inline std::uint64_t instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(inst.machines));
  mix(static_cast<std::uint64_t>(inst.tick_scale));
  mix(inst.jobs.size());
  for (const Job& j : inst.jobs) {
    mix(static_cast<std::uint64_t>(j.id));
    mix(static_cast<std::uint64_t>(j.release));
    mix(static_cast<std::uint64_t>(j.size));
    mix(static_cast<std::uint64_t>(j.deadline));
  }
  return h;
}

}  // namespace schedsim
