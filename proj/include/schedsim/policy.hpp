#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "schedsim/job.hpp"
#include "schedsim/trace.hpp"

namespace schedsim {

struct RunEntry {
  int machine = 0;
  int job = 0;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

/// Behavioral contract between the simulation kernel and a scheduling policy.
///
/// The kernel drives a policy strictly by event boundaries. At each boundary
/// time t it calls, in order: advance_to(t) (the policy applies unit-rate
/// processing to its last run set), on_completion / on_release for the events
/// at t, on_tick_boundary(t), and finally run_set(t). Policies that need to
/// wake the kernel at self-generated future times (viability window expiries,
/// virtual completions) report them through next_wake_time().
///
/// A policy tracks its own view of remaining processing times. For a policy
/// driven directly by the kernel this view coincides with physical remaining
/// time; a composite driver may feed a policy virtual events instead.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int machine_count() const = 0;

  /// Apply unit-rate processing to the last returned run set up to time t.
  virtual void advance_to(Tick t) = 0;

  virtual void on_release(const Job& job, Tick t) = 0;

  /// The driver observed this job's remaining time (in this policy's view)
  /// reach zero at time t.
  virtual void on_completion(int job, Tick t) = 0;

  /// Called once per boundary after all events at t were delivered.
  virtual void on_tick_boundary(Tick t) = 0;

  /// Earliest self-generated future time the kernel must visit, if any.
  /// Must be strictly later than the last boundary.
  virtual std::optional<Tick> next_wake_time() const = 0;

  /// Up to machine_count() (machine, job) pairs; machines are policy-local
  /// indices in [0, machine_count()). Every job must be released, tracked,
  /// and feasible in the policy's view.
  virtual std::vector<RunEntry> run_set(Tick t) = 0;

  virtual Tick view_remaining(int job) const = 0;

  virtual void attach_trace(Trace* trace) { trace_ = trace; }

 protected:
  void emit(StackEventKind kind, Tick t, int job, int stack = -1,
            int evicted = -1) {
    if (trace_ != nullptr) trace_->add_stack_event(kind, t, job, stack, evicted);
  }

  Trace* trace_ = nullptr;
};

/// Deterministic machine allocator: a job keeps its machine while it stays
/// selected; freed machines are handed to new jobs in ascending job id order.
class StickyAllocator {
 public:
  explicit StickyAllocator(int machines, int max_jobs)
      : machine_of_(static_cast<std::size_t>(max_jobs), -1),
        job_on_(static_cast<std::size_t>(machines), -1) {}

  std::vector<RunEntry> assign(std::vector<int> jobs) {
    std::sort(jobs.begin(), jobs.end());
    std::vector<char> keep(job_on_.size(), 0);
    std::vector<int> fresh;
    for (int j : jobs) {
      const int mach = machine_of_[static_cast<std::size_t>(j)];
      if (mach >= 0 && job_on_[static_cast<std::size_t>(mach)] == j) {
        keep[static_cast<std::size_t>(mach)] = 1;
      } else {
        fresh.push_back(j);
      }
    }
    for (std::size_t mach = 0; mach < job_on_.size(); ++mach) {
      if (!keep[mach] && job_on_[mach] >= 0) {
        machine_of_[static_cast<std::size_t>(job_on_[mach])] = -1;
        job_on_[mach] = -1;
      }
    }
    std::size_t next_free = 0;
    for (int j : fresh) {
      while (next_free < job_on_.size() && job_on_[next_free] >= 0) ++next_free;
      job_on_[next_free] = j;
      machine_of_[static_cast<std::size_t>(j)] = static_cast<int>(next_free);
    }
    std::vector<RunEntry> out;
    out.reserve(jobs.size());
    for (int j : jobs)
      out.push_back({machine_of_[static_cast<std::size_t>(j)], j});
    return out;
  }

 private:
  std::vector<int> machine_of_;
  std::vector<int> job_on_;
};

}  // namespace schedsim
