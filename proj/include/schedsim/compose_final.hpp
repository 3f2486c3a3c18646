#pragma once

#include <cassert>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schedsim/config.hpp"
#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy.hpp"
#include "schedsim/policy_highlax.hpp"
#include "schedsim/policy_mlax.hpp"
#include "schedsim/policy_srpt.hpp"

namespace schedsim {

enum class SharedWinner { kSrpt, kMlax };

/// Arbitration for a job both low-laxity schedulers want to run: the one
/// with the strictly smaller remaining time runs it physically, the other
/// simulates. Equal remaining goes to SRPT.
inline SharedWinner arbitrate_shared(Tick srpt_remaining, Tick mlax_remaining) {
  return srpt_remaining <= mlax_remaining ? SharedWinner::kSrpt
                                          : SharedWinner::kMlax;
}

/// Three-way composition: machines are split into three equal blocks of
/// floor(m/3) (remainder idle). The high-laxity substream (laxity > size)
/// goes to a pluggable scheduler on block 0; the low-laxity substream is fed
/// to both SRPT (block 1) and the stack scheduler (block 2), which each keep
/// their own virtual remaining times. A job wanted by both runs physically
/// in the copy where it is shorter while the other copy simulates; physical
/// remaining time decreases whenever at least one copy runs the job, so it
/// never exceeds either virtual remaining time.
class FinalPolicy : public Policy {
 public:
  FinalPolicy(int machines, int num_jobs, MlaxConfig cfg = {},
              const std::string& highlax_name = "admission_edf")
      : m_total_(machines),
        group_(machines / 3),
        hi_(make_highlax(highlax_name, machines / 3, num_jobs)),
        srpt_(machines / 3, num_jobs),
        mlax_(machines / 3, num_jobs, cfg) {
    if (machines < 3)
      throw ConfigError("final composition needs at least 3 machines");
    const std::size_t n = static_cast<std::size_t>(num_jobs);
    phys_remaining_.assign(n, 0);
    is_hi_.assign(n, 0);
  }

  int machine_count() const override { return m_total_; }
  int group_size() const { return group_; }

  void attach_trace(Trace* trace) override {
    trace_ = trace;
    mlax_.attach_trace(trace);
  }

  void advance_to(Tick t) override {
    const Tick dt = t - last_t_;
    last_t_ = t;
    if (dt == 0) return;
    for (const RunEntry& e : last_phys_run_)
      phys_remaining_[static_cast<std::size_t>(e.job)] -= dt;
    hi_->advance_to(t);
    srpt_.advance_to(t);
    mlax_.advance_to(t);
    deliver_virtual_completions(*hi_, hi_rs_, t, &virtual_hi_);
    deliver_virtual_completions(srpt_, srpt_rs_, t, &virtual_srpt_);
    deliver_virtual_completions(mlax_, mlax_rs_, t, &virtual_mlax_);
  }

  void on_release(const Job& job, Tick t) override {
    const std::size_t j = static_cast<std::size_t>(job.id);
    phys_remaining_[j] = job.size;
    is_hi_[j] = is_high_laxity(job) ? 1 : 0;
    if (is_hi_[j]) {
      hi_->on_release(job, t);
    } else {
      srpt_.on_release(job, t);
      mlax_.on_release(job, t);
    }
  }

  void on_completion(int job, Tick) override {
    assert(phys_remaining_[static_cast<std::size_t>(job)] == 0);
    (void)job;
  }

  void on_tick_boundary(Tick t) override {
    hi_->on_tick_boundary(t);
    srpt_.on_tick_boundary(t);
    mlax_.on_tick_boundary(t);
  }

  std::optional<Tick> next_wake_time() const override {
    std::optional<Tick> best;
    const auto consider = [&best](std::optional<Tick> c) {
      if (c.has_value() && (!best.has_value() || *c < *best)) best = c;
    };
    consider(hi_->next_wake_time());
    consider(srpt_.next_wake_time());
    consider(mlax_.next_wake_time());
    const auto virtual_completions = [&](const Policy& p,
                                         const std::vector<RunEntry>& rs) {
      for (const RunEntry& e : rs) {
        const Tick v = p.view_remaining(e.job);
        if (v > 0) consider(last_t_ + v);
      }
    };
    virtual_completions(*hi_, hi_rs_);
    virtual_completions(srpt_, srpt_rs_);
    virtual_completions(mlax_, mlax_rs_);
    return best;
  }

  std::vector<RunEntry> run_set(Tick t) override {
    hi_rs_ = hi_->run_set(t);
    srpt_rs_ = srpt_.run_set(t);
    mlax_rs_ = mlax_.run_set(t);

    std::vector<RunEntry> out;
    out.reserve(hi_rs_.size() + srpt_rs_.size() + mlax_rs_.size());
    for (const RunEntry& e : hi_rs_) {
      assert(phys_remaining_[static_cast<std::size_t>(e.job)] ==
             hi_->view_remaining(e.job));
      out.push_back({e.machine, e.job});
    }

    mlax_machine_of_.assign(phys_remaining_.size(), -1);
    for (const RunEntry& e : mlax_rs_)
      mlax_machine_of_[static_cast<std::size_t>(e.job)] = e.machine;
    in_srpt_.assign(phys_remaining_.size(), 0);
    for (const RunEntry& e : srpt_rs_)
      in_srpt_[static_cast<std::size_t>(e.job)] = 1;

    for (const RunEntry& e : srpt_rs_) {
      const std::size_t j = static_cast<std::size_t>(e.job);
      assert(phys_remaining_[j] <= srpt_.view_remaining(e.job));
      if (phys_remaining_[j] <= 0) continue;
      const bool shared = mlax_machine_of_[j] >= 0;
      if (shared && arbitrate_shared(srpt_.view_remaining(e.job),
                                     mlax_.view_remaining(e.job)) ==
                        SharedWinner::kMlax)
        continue;  // the stack copy runs it; SRPT simulates
      out.push_back({group_ + e.machine, e.job});
    }
    for (const RunEntry& e : mlax_rs_) {
      const std::size_t j = static_cast<std::size_t>(e.job);
      assert(phys_remaining_[j] <= mlax_.view_remaining(e.job));
      if (phys_remaining_[j] <= 0) continue;
      if (in_srpt_[j] && arbitrate_shared(srpt_.view_remaining(e.job),
                                          mlax_.view_remaining(e.job)) ==
                             SharedWinner::kSrpt)
        continue;
      out.push_back({2 * group_ + e.machine, e.job});
    }

    last_phys_run_ = out;
    return out;
  }

  Tick view_remaining(int job) const override {
    return phys_remaining_[static_cast<std::size_t>(job)];
  }

  int virtual_hi_completions() const { return virtual_hi_; }
  int virtual_srpt_completions() const { return virtual_srpt_; }
  int virtual_mlax_completions() const { return virtual_mlax_; }
  const std::vector<int>& admitted_high_laxity() const { return hi_->admitted(); }

 private:
  void deliver_virtual_completions(Policy& p, const std::vector<RunEntry>& rs,
                                   Tick t, int* counter) {
    std::vector<int> done;
    for (const RunEntry& e : rs)
      if (p.view_remaining(e.job) == 0) done.push_back(e.job);
    std::sort(done.begin(), done.end());
    for (int job : done) {
      // A virtual completion implies the job is physically complete.
      assert(phys_remaining_[static_cast<std::size_t>(job)] == 0);
      p.on_completion(job, t);
      ++*counter;
    }
  }

  int m_total_;
  int group_;
  std::unique_ptr<HighLaxPolicy> hi_;
  SrptPolicy srpt_;
  MlaxPolicy mlax_;

  std::vector<Tick> phys_remaining_;
  std::vector<char> is_hi_;
  std::vector<RunEntry> hi_rs_, srpt_rs_, mlax_rs_;
  std::vector<RunEntry> last_phys_run_;
  std::vector<int> mlax_machine_of_;
  std::vector<char> in_srpt_;
  Tick last_t_ = 0;
  int virtual_hi_ = 0;
  int virtual_srpt_ = 0;
  int virtual_mlax_ = 0;
};

}  // namespace schedsim
