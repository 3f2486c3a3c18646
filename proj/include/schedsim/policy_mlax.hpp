#pragma once

#include <algorithm>
#include <cassert>
#include <functional>
#include <queue>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "schedsim/config.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy.hpp"

namespace schedsim {

// ---------------------------------------------------------------------------
// Decision rules, factored out of the policy so they can be tested directly.
// Frontier/stack positions holding the sentinel are passed as kInfTick.
// ---------------------------------------------------------------------------

/// Number of frontier slots whose scaled top size passes the viability
/// comparison alpha * x_top >= job_laxity (sentinels always pass).
inline int viability_count(std::span<const Tick> frontier_alpha_x, Tick job_laxity) {
  int count = 0;
  for (Tick v : frontier_alpha_x)
    if (v >= job_laxity) ++count;
  return count;
}

/// Viability test for a pending job against the current frontier: at least
/// ceil(fraction * m) tops j' must satisfy alpha * x_{j'} >= laxity of the job.
inline bool check_viability(std::span<const Tick> frontier_alpha_x, Tick job_laxity,
                            Fraction fraction, int m) {
  return viability_count(frontier_alpha_x, job_laxity) >= ceil_fraction(fraction, m);
}

struct RuleDecision {
  enum Kind { kPushed, kReplaced, kNoOp };
  Kind kind = kNoOp;
  int stack = -1;
  int evicted = -1;  // top job replaced out, for kReplaced
};

/// Stack-update rule at a pseudo-release.
///
/// Push: some stack's top j' satisfies alpha * x_j <= laxity(j'); the lowest
/// such stack index wins. In the lax variant the push additionally requires
/// the strict-feasibility gate (half the original laxity still remaining),
/// passed in as `strict_gate_ok`.
///
/// Replace: among stacks whose second-top j'' satisfies alpha * x_j <=
/// laxity(j''), pick one whose top j' has laxity(j') < laxity(j), minimizing
/// laxity(j') with ties toward the lower stack index. The plain variant
/// demands at least ceil(replace_fraction * m) stacks pass the second-top
/// test before any replacement; the lax variant only needs the chosen stack.
inline RuleDecision decide_pseudo_release(std::span<const Tick> top_laxity,
                                          std::span<const Tick> second_laxity,
                                          Tick alpha_x_job, Tick job_laxity,
                                          bool strict_gate_ok,
                                          const MlaxConfig& cfg, int m) {
  RuleDecision d;
  if (cfg.variant == MlaxVariant::kMlax || strict_gate_ok) {
    for (int i = 0; i < m; ++i) {
      if (alpha_x_job <= top_laxity[static_cast<std::size_t>(i)]) {
        d.kind = RuleDecision::kPushed;
        d.stack = i;
        return d;
      }
    }
  }
  if (cfg.variant == MlaxVariant::kMlax) {
    int quorum = 0;
    for (int i = 0; i < m; ++i)
      if (alpha_x_job <= second_laxity[static_cast<std::size_t>(i)]) ++quorum;
    if (quorum < ceil_fraction(cfg.replace_fraction, m)) return d;
  }
  int best = -1;
  for (int i = 0; i < m; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    if (alpha_x_job > second_laxity[si]) continue;
    if (top_laxity[si] >= job_laxity) continue;
    if (best < 0 || top_laxity[si] < top_laxity[static_cast<std::size_t>(best)])
      best = i;
  }
  if (best >= 0) {
    d.kind = RuleDecision::kReplaced;
    d.stack = best;
  }
  return d;
}

/// Completion-pop rule: pop the completed top, then keep popping while the
/// exposed top is infeasible. Returns (job, was_completion_pop) in pop order.
template <class FeasibleFn>
inline std::vector<std::pair<int, bool>> completion_pops(std::vector<int>& stack,
                                                         FeasibleFn&& feasible) {
  std::vector<std::pair<int, bool>> popped;
  popped.emplace_back(stack.back(), true);
  stack.pop_back();
  while (!stack.empty() && !feasible(stack.back())) {
    popped.emplace_back(stack.back(), false);
    stack.pop_back();
  }
  return popped;
}

/// Strict feasibility gate of the lax variant: the job still has at least
/// half of its original laxity left, 2 * (d - t - remaining) >= laxity.
inline bool strictly_half_lax(Tick deadline, Tick remaining, Tick original_laxity,
                              Tick t) {
  return 2 * (deadline - t - remaining) >= original_laxity;
}

// ---------------------------------------------------------------------------

/// Stack scheduler over m machine-bound stacks with sentinel bottoms.
///
/// Each released job becomes pending for the duration of its viability
/// window [r, r + laxity/2]. The earliest instant the frontier satisfies the
/// viability quorum is the job's pseudo-release time; the push/replace rules
/// run once at that instant and the job is never reconsidered afterwards
/// (neither are replaced-out jobs or jobs whose window expires). The top of
/// stack i always runs on machine i.
///
/// Viability only depends on original sizes and laxities of the stack tops,
/// so pending jobs are re-examined exactly when the frontier changes; between
/// stack operations the threshold is constant.
class MlaxPolicy : public Policy {
 public:
  MlaxPolicy(int machines, int num_jobs, MlaxConfig cfg = {})
      : m_(machines), cfg_(cfg), stacks_(static_cast<std::size_t>(machines)) {
    check_config(cfg_);
    if (cfg_.variant == MlaxVariant::kLaxVariant) cfg_.viability_fraction = {1, 2};
    const std::size_t n = static_cast<std::size_t>(num_jobs);
    release_.assign(n, 0);
    size_.assign(n, 0);
    deadline_.assign(n, 0);
    laxity_.assign(n, 0);
    remaining_.assign(n, 0);
    stack_of_.assign(n, -1);
    pending_flag_.assign(n, 0);
  }

  int machine_count() const override { return m_; }

  const MlaxConfig& config() const { return cfg_; }

  void advance_to(Tick t) override {
    const Tick dt = t - last_t_;
    last_t_ = t;
    if (dt == 0) return;
    for (const RunEntry& e : last_run_)
      remaining_[static_cast<std::size_t>(e.job)] -= dt;
  }

  void on_release(const Job& job, Tick) override {
    const std::size_t j = static_cast<std::size_t>(job.id);
    release_[j] = job.release;
    size_[j] = job.size;
    deadline_[j] = job.deadline;
    laxity_[j] = laxity(job);
    remaining_[j] = job.size;
    assert(laxity_[j] % 2 == 0 && "window end r + laxity/2 must be an exact tick");
    pending_.insert({laxity_[j], job.id});
    pending_flag_[j] = 1;
    expiries_.push({window_end(job.id), job.id});
  }

  void on_completion(int job, Tick t) override {
    const std::size_t j = static_cast<std::size_t>(job);
    assert(remaining_[j] == 0);
    const int i = stack_of_[j];
    assert(i >= 0 && stacks_[static_cast<std::size_t>(i)].back() == job);
    auto popped = completion_pops(stacks_[static_cast<std::size_t>(i)], [&](int top) {
      const std::size_t tj = static_cast<std::size_t>(top);
      return is_feasible(remaining_[tj], deadline_[tj], t);
    });
    for (const auto& [pj, was_completion] : popped) {
      stack_of_[static_cast<std::size_t>(pj)] = -1;
      emit(was_completion ? StackEventKind::kCompletionPop
                          : StackEventKind::kInfeasiblePop,
           t, pj, i);
    }
  }

  void on_tick_boundary(Tick t) override {
    scan_pending(t);
    expire_windows(t);
  }

  std::optional<Tick> next_wake_time() const override {
    if (expiries_.empty()) return std::nullopt;
    return expiries_.top().first;
  }

  std::vector<RunEntry> run_set(Tick t) override {
    (void)t;
    last_run_.clear();
    for (int i = 0; i < m_; ++i) {
      const auto& st = stacks_[static_cast<std::size_t>(i)];
      if (st.empty()) continue;
      const int top = st.back();
      assert(is_feasible(remaining_[static_cast<std::size_t>(top)],
                         deadline_[static_cast<std::size_t>(top)], t));
      last_run_.push_back({i, top});
    }
    return last_run_;
  }

  Tick view_remaining(int job) const override {
    return remaining_[static_cast<std::size_t>(job)];
  }

  Tick window_end(int job) const {
    const std::size_t j = static_cast<std::size_t>(job);
    return release_[j] + laxity_[j] / 2;
  }

 private:
  Tick frontier_alpha_x(int i) const {
    const auto& st = stacks_[static_cast<std::size_t>(i)];
    return st.empty() ? kInfTick
                      : cfg_.alpha * size_[static_cast<std::size_t>(st.back())];
  }

  Tick top_laxity(int i) const {
    const auto& st = stacks_[static_cast<std::size_t>(i)];
    return st.empty() ? kInfTick : laxity_[static_cast<std::size_t>(st.back())];
  }

  Tick second_laxity(int i) const {
    const auto& st = stacks_[static_cast<std::size_t>(i)];
    return st.size() < 2 ? kInfTick
                         : laxity_[static_cast<std::size_t>(st[st.size() - 2])];
  }

  /// Laxity bound theta such that a pending job is viable iff its laxity is
  /// at most theta (the K-th largest frontier value, K the viability quorum).
  Tick viability_threshold() const {
    buf_.clear();
    for (int i = 0; i < m_; ++i) buf_.push_back(frontier_alpha_x(i));
    const int k = ceil_fraction(cfg_.viability_fraction, m_);
    std::nth_element(buf_.begin(), buf_.begin() + (k - 1), buf_.end(),
                     std::greater<Tick>());
    return buf_[static_cast<std::size_t>(k - 1)];
  }

  // Resolve every pending job that is viable right now. Processing order is
  // ascending (laxity, id); after each stack operation the threshold is
  // recomputed, since the operation may change who is viable at this instant.
  void scan_pending(Tick t) {
    while (!pending_.empty()) {
      const Tick theta = viability_threshold();
      const auto it = pending_.begin();
      if (it->first > theta) break;
      const int job = it->second;
      pending_.erase(it);
      pending_flag_[static_cast<std::size_t>(job)] = 0;
      assert(t >= release_[static_cast<std::size_t>(job)] && t <= window_end(job));
      emit(StackEventKind::kPseudoRelease, t, job);
      apply_rules(job, t);
    }
  }

  void apply_rules(int job, Tick t) {
    const std::size_t j = static_cast<std::size_t>(job);
    tops_.clear();
    seconds_.clear();
    for (int i = 0; i < m_; ++i) {
      tops_.push_back(top_laxity(i));
      seconds_.push_back(second_laxity(i));
    }
    const bool gate = cfg_.variant == MlaxVariant::kMlax ||
                      strictly_half_lax(deadline_[j], remaining_[j], laxity_[j], t);
    const RuleDecision d = decide_pseudo_release(
        tops_, seconds_, cfg_.alpha * size_[j], laxity_[j], gate, cfg_, m_);
    switch (d.kind) {
      case RuleDecision::kPushed: {
        stacks_[static_cast<std::size_t>(d.stack)].push_back(job);
        stack_of_[j] = d.stack;
        emit(StackEventKind::kPush, t, job, d.stack);
        break;
      }
      case RuleDecision::kReplaced: {
        auto& st = stacks_[static_cast<std::size_t>(d.stack)];
        const int evicted = st.back();
        st.back() = job;
        stack_of_[static_cast<std::size_t>(evicted)] = -1;
        stack_of_[j] = d.stack;
        emit(StackEventKind::kReplace, t, job, d.stack, evicted);
        break;
      }
      case RuleDecision::kNoOp:
        break;
    }
  }

  void expire_windows(Tick t) {
    while (!expiries_.empty() && expiries_.top().first <= t) {
      const auto [when, job] = expiries_.top();
      expiries_.pop();
      const std::size_t j = static_cast<std::size_t>(job);
      if (!pending_flag_[j]) continue;
      pending_.erase({laxity_[j], job});
      pending_flag_[j] = 0;
      emit(StackEventKind::kWindowExpiry, when, job);
    }
  }

  int m_;
  MlaxConfig cfg_;
  std::vector<std::vector<int>> stacks_;  // bottom..top job ids; sentinel implicit
  std::vector<Tick> release_, size_, deadline_, laxity_, remaining_;
  std::vector<int> stack_of_;
  std::set<std::pair<Tick, int>> pending_;  // (laxity, id)
  std::vector<char> pending_flag_;
  std::priority_queue<std::pair<Tick, int>, std::vector<std::pair<Tick, int>>,
                      std::greater<std::pair<Tick, int>>>
      expiries_;
  std::vector<RunEntry> last_run_;
  Tick last_t_ = 0;
  mutable std::vector<Tick> buf_;
  std::vector<Tick> tops_, seconds_;
};

}  // namespace schedsim
