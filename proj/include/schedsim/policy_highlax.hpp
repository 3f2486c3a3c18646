#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy.hpp"

namespace schedsim {

/// Scheduler slot for the high-laxity substream. Implementations expose the
/// set of jobs they committed to, so soundness (every admitted job finishes
/// on time) can be checked from the outside.
class HighLaxPolicy : public Policy {
 public:
  virtual const std::vector<int>& admitted() const = 0;
};

/// Admission-controlled EDF stand-in. A newly released job is admitted iff
/// EDF (earliest deadline first, ties by id) completes the current admitted
/// workload plus the new job on m machines, judged by simulating that exact
/// rule forward from the current remaining times. Admitted jobs are never
/// dropped. This makes no competitiveness claim; it is a sound default that
/// never misses a deadline for a job it accepted.
class AdmissionEdfPolicy : public HighLaxPolicy {
 public:
  AdmissionEdfPolicy(int machines, int num_jobs)
      : m_(machines),
        remaining_(static_cast<std::size_t>(num_jobs), 0),
        deadline_(static_cast<std::size_t>(num_jobs), 0),
        alloc_(machines, num_jobs) {}

  int machine_count() const override { return m_; }

  const std::vector<int>& admitted() const override { return admitted_ids_; }

  void advance_to(Tick t) override {
    const Tick dt = t - last_t_;
    last_t_ = t;
    if (dt == 0) return;
    for (const RunEntry& e : last_run_) {
      const std::size_t j = static_cast<std::size_t>(e.job);
      active_.erase({deadline_[j], e.job});
      remaining_[j] -= dt;
      active_.insert({deadline_[j], e.job});
    }
  }

  void on_release(const Job& job, Tick t) override {
    const std::size_t j = static_cast<std::size_t>(job.id);
    remaining_[j] = job.size;
    deadline_[j] = job.deadline;
    if (!edf_completes_all(job.id, t)) return;
    active_.insert({job.deadline, job.id});
    admitted_ids_.push_back(job.id);
  }

  void on_completion(int job, Tick t) override {
    const std::size_t j = static_cast<std::size_t>(job);
    assert(remaining_[j] == 0 && t <= deadline_[j]);
    (void)t;
    active_.erase({deadline_[j], job});
  }

  void on_tick_boundary(Tick) override {}

  std::optional<Tick> next_wake_time() const override { return std::nullopt; }

  std::vector<RunEntry> run_set(Tick t) override {
    (void)t;
    std::vector<int> chosen;
    for (auto it = active_.begin();
         it != active_.end() && static_cast<int>(chosen.size()) < m_; ++it)
      chosen.push_back(it->second);
    last_run_ = alloc_.assign(std::move(chosen));
    return last_run_;
  }

  Tick view_remaining(int job) const override {
    return remaining_[static_cast<std::size_t>(job)];
  }

 private:
  // Forward-simulate EDF on the admitted set plus `extra` from time t. The
  // preference order (deadline, id) is static, so the run set changes only at
  // completions and the simulation advances completion-to-completion.
  bool edf_completes_all(int extra, Tick t) const {
    std::vector<std::pair<std::pair<Tick, int>, Tick>> sim;  // ((d, id), rem)
    sim.reserve(active_.size() + 1);
    for (const auto& [key, id] : active_)
      sim.push_back({{key, id}, remaining_[static_cast<std::size_t>(id)]});
    sim.push_back({{deadline_[static_cast<std::size_t>(extra)], extra},
                   remaining_[static_cast<std::size_t>(extra)]});
    std::sort(sim.begin(), sim.end());
    Tick clock = t;
    std::size_t unfinished = sim.size();
    std::vector<std::size_t> window;
    while (unfinished > 0) {
      window.clear();
      for (std::size_t i = 0;
           i < sim.size() && window.size() < static_cast<std::size_t>(m_); ++i)
        if (sim[i].second > 0) window.push_back(i);
      Tick dt = kInfTick;
      for (std::size_t i : window) dt = std::min(dt, sim[i].second);
      clock += dt;
      for (std::size_t i : window) {
        sim[i].second -= dt;
        if (sim[i].second == 0) {
          if (clock > sim[i].first.first) return false;
          --unfinished;
        }
      }
    }
    return true;
  }

  int m_;
  std::vector<Tick> remaining_;
  std::vector<Tick> deadline_;
  std::set<std::pair<Tick, int>> active_;  // (deadline, id), admitted & unfinished
  std::vector<int> admitted_ids_;
  std::vector<RunEntry> last_run_;
  Tick last_t_ = 0;
  StickyAllocator alloc_;
};

inline std::unique_ptr<HighLaxPolicy> make_highlax(const std::string& name,
                                                   int machines, int num_jobs) {
  if (name == "admission_edf")
    return std::make_unique<AdmissionEdfPolicy>(machines, num_jobs);
  throw ConfigError("unknown highlax scheduler: " + name);
}

}  // namespace schedsim
