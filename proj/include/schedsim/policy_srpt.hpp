#pragma once

#include <cassert>
#include <set>
#include <utility>
#include <vector>

#include "schedsim/job.hpp"
#include "schedsim/policy.hpp"

namespace schedsim {

/// Run the m feasible jobs with shortest remaining processing time; when
/// fewer than m are feasible, run them all. Ties break toward the smaller
/// job id. Jobs that turn infeasible while waiting are pruned lazily: once
/// t + remaining exceeds the deadline of a non-running job it can never
/// recover, so pruning is permanent.
class SrptPolicy : public Policy {
 public:
  SrptPolicy(int machines, int num_jobs)
      : m_(machines),
        remaining_(static_cast<std::size_t>(num_jobs), 0),
        deadline_(static_cast<std::size_t>(num_jobs), 0),
        alloc_(machines, num_jobs) {}

  int machine_count() const override { return m_; }

  void advance_to(Tick t) override {
    const Tick dt = t - last_t_;
    last_t_ = t;
    if (dt == 0) return;
    for (const RunEntry& e : last_run_) {
      const std::size_t j = static_cast<std::size_t>(e.job);
      candidates_.erase({remaining_[j], e.job});
      remaining_[j] -= dt;
      candidates_.insert({remaining_[j], e.job});
    }
  }

  void on_release(const Job& job, Tick) override {
    const std::size_t j = static_cast<std::size_t>(job.id);
    remaining_[j] = job.size;
    deadline_[j] = job.deadline;
    candidates_.insert({job.size, job.id});
  }

  void on_completion(int job, Tick) override {
    const std::size_t j = static_cast<std::size_t>(job);
    assert(remaining_[j] == 0);
    candidates_.erase({remaining_[j], job});
  }

  void on_tick_boundary(Tick) override {}

  std::optional<Tick> next_wake_time() const override { return std::nullopt; }

  std::vector<RunEntry> run_set(Tick t) override {
    std::vector<int> chosen;
    auto it = candidates_.begin();
    while (it != candidates_.end() && static_cast<int>(chosen.size()) < m_) {
      const auto [rem, job] = *it;
      if (is_feasible(rem, deadline_[static_cast<std::size_t>(job)], t)) {
        chosen.push_back(job);
        ++it;
      } else {
        it = candidates_.erase(it);
      }
    }
    last_run_ = alloc_.assign(std::move(chosen));
    return last_run_;
  }

  Tick view_remaining(int job) const override {
    return remaining_[static_cast<std::size_t>(job)];
  }

 private:
  int m_;
  std::vector<Tick> remaining_;
  std::vector<Tick> deadline_;
  std::set<std::pair<Tick, int>> candidates_;  // (remaining, id)
  std::vector<RunEntry> last_run_;
  Tick last_t_ = 0;
  StickyAllocator alloc_;
};

}  // namespace schedsim
