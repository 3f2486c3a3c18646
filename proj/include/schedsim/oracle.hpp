#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"

namespace schedsim {

/// Dinic max-flow on small integer networks.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : head_(static_cast<std::size_t>(nodes)) {}

  void add_edge(int u, int v, Tick cap) {
    head_[static_cast<std::size_t>(u)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    head_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0});
  }

  Tick max_flow(int s, int t) {
    Tick total = 0;
    while (bfs(s, t)) {
      iter_.assign(head_.size(), 0);
      Tick f;
      while ((f = dfs(s, t, kInfTick)) > 0) total += f;
    }
    return total;
  }

 private:
  struct Edge {
    int to;
    Tick cap;
  };

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    queue_.clear();
    queue_.push_back(s);
    level_[static_cast<std::size_t>(s)] = 0;
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const int u = queue_[qi];
      for (int ei : head_[static_cast<std::size_t>(u)]) {
        const Edge& e = edges_[static_cast<std::size_t>(ei)];
        if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] >= 0) continue;
        level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(u)] + 1;
        queue_.push_back(e.to);
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  Tick dfs(int u, int t, Tick limit) {
    if (u == t) return limit;
    for (std::size_t& i = iter_[static_cast<std::size_t>(u)];
         i < head_[static_cast<std::size_t>(u)].size(); ++i) {
      const int ei = head_[static_cast<std::size_t>(u)][i];
      Edge& e = edges_[static_cast<std::size_t>(ei)];
      if (e.cap <= 0 ||
          level_[static_cast<std::size_t>(e.to)] !=
              level_[static_cast<std::size_t>(u)] + 1)
        continue;
      const Tick got = dfs(e.to, t, std::min(limit, e.cap));
      if (got > 0) {
        e.cap -= got;
        edges_[static_cast<std::size_t>(ei ^ 1)].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::vector<int> queue_;
};

/// Exact feasibility of completing every job of S on m machines (preemptive,
/// migratory): route x_j units from each job through the elementary intervals
/// between the sorted distinct release/deadline points, interval capacity
/// length per job and m * length in aggregate. S is feasible iff the max
/// flow saturates the total demand.
inline bool feasible_subset(const std::vector<Job>& jobs, int m) {
  if (jobs.empty()) return true;
  std::vector<Tick> points;
  points.reserve(jobs.size() * 2);
  Tick demand = 0;
  for (const Job& j : jobs) {
    points.push_back(j.release);
    points.push_back(j.deadline);
    demand += j.size;
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const int intervals = static_cast<int>(points.size()) - 1;
  const int n = static_cast<int>(jobs.size());
  const int source = 0;
  const int sink = 1 + n + intervals;
  FlowNetwork net(sink + 1);
  for (int i = 0; i < n; ++i) net.add_edge(source, 1 + i, jobs[static_cast<std::size_t>(i)].size);
  for (int k = 0; k < intervals; ++k) {
    const Tick len = points[static_cast<std::size_t>(k) + 1] - points[static_cast<std::size_t>(k)];
    net.add_edge(1 + n + k, sink, static_cast<Tick>(m) * len);
    for (int i = 0; i < n; ++i) {
      const Job& j = jobs[static_cast<std::size_t>(i)];
      if (j.release <= points[static_cast<std::size_t>(k)] &&
          points[static_cast<std::size_t>(k) + 1] <= j.deadline)
        net.add_edge(1 + i, 1 + n + k, len);
    }
  }
  return net.max_flow(source, sink) == demand;
}

struct SlotOracleConfig {
  std::int64_t max_slots = 20000;  // limit on horizon * machines
};

namespace detail {

// One unit of some job looks for a slot: a free one in its window, or one it
// can take after pushing an occupant's unit elsewhere (alternating path).
class SlotMatcher {
 public:
  SlotMatcher(const std::vector<Job>& jobs, Tick base, Tick horizon, int m)
      : jobs_(jobs),
        base_(base),
        m_(m),
        used_(jobs.size(), std::vector<char>(static_cast<std::size_t>(horizon), 0)),
        slot_jobs_(static_cast<std::size_t>(horizon)),
        visited_(jobs.size(), 0) {}

  bool place_all() {
    greedy_earliest_deadline();
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      Tick deficit = jobs_[i].size - placed_[i];
      while (deficit > 0) {
        std::fill(visited_.begin(), visited_.end(), 0);
        if (!place_unit(static_cast<int>(i))) return false;
        --deficit;
      }
    }
    return true;
  }

 private:
  Tick lo(std::size_t i) const { return jobs_[i].release - base_; }
  Tick hi(std::size_t i) const { return jobs_[i].deadline - base_; }

  void greedy_earliest_deadline() {
    placed_.assign(jobs_.size(), 0);
    std::vector<std::pair<std::pair<Tick, int>, std::size_t>> avail;  // ((d,id), idx)
    for (Tick t = 0; t < static_cast<Tick>(slot_jobs_.size()); ++t) {
      avail.clear();
      for (std::size_t i = 0; i < jobs_.size(); ++i)
        if (lo(i) <= t && t < hi(i) && placed_[i] < jobs_[i].size)
          avail.push_back({{jobs_[i].deadline, jobs_[i].id}, i});
      std::sort(avail.begin(), avail.end());
      const std::size_t take = std::min<std::size_t>(avail.size(), static_cast<std::size_t>(m_));
      for (std::size_t k = 0; k < take; ++k) {
        const std::size_t i = avail[k].second;
        used_[i][static_cast<std::size_t>(t)] = 1;
        slot_jobs_[static_cast<std::size_t>(t)].push_back(static_cast<int>(i));
        ++placed_[i];
      }
    }
  }

  bool place_unit(int i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    visited_[ii] = 1;
    for (Tick t = lo(ii); t < hi(ii); ++t) {
      const std::size_t ts = static_cast<std::size_t>(t);
      if (used_[ii][ts]) continue;
      if (static_cast<int>(slot_jobs_[ts].size()) < m_) {
        used_[ii][ts] = 1;
        slot_jobs_[ts].push_back(i);
        return true;
      }
    }
    for (Tick t = lo(ii); t < hi(ii); ++t) {
      const std::size_t ts = static_cast<std::size_t>(t);
      if (used_[ii][ts]) continue;
      for (std::size_t oi = 0; oi < slot_jobs_[ts].size(); ++oi) {
        const int k = slot_jobs_[ts][oi];
        const std::size_t kk = static_cast<std::size_t>(k);
        if (visited_[kk]) continue;
        used_[kk][ts] = 0;
        used_[ii][ts] = 1;
        slot_jobs_[ts][oi] = i;
        if (place_unit(k)) return true;
        slot_jobs_[ts][oi] = k;
        used_[ii][ts] = 0;
        used_[kk][ts] = 1;
      }
    }
    return false;
  }

  const std::vector<Job>& jobs_;
  Tick base_;
  int m_;
  std::vector<std::vector<char>> used_;
  std::vector<std::vector<int>> slot_jobs_;
  std::vector<Tick> placed_;
  std::vector<char> visited_;
};

}  // namespace detail

/// Independent cross-check oracle: each job needs size-many distinct unit
/// slots inside [release, deadline), at most m jobs per slot. Agrees with
/// feasible_subset on every input within its scale limit.
inline bool feasible_subset_slots(const std::vector<Job>& jobs, int m,
                                  const SlotOracleConfig& cfg = {}) {
  if (jobs.empty()) return true;
  Tick base = kInfTick, end = 0, demand = 0;
  for (const Job& j : jobs) {
    base = std::min(base, j.release);
    end = std::max(end, j.deadline);
    demand += j.size;
  }
  const Tick horizon = end - base;
  if (horizon * m > cfg.max_slots)
    throw ScaleError("slot oracle limit exceeded: " + std::to_string(horizon * m) +
                     " slots > " + std::to_string(cfg.max_slots));
  if (demand > horizon * m) return false;
  detail::SlotMatcher matcher(jobs, base, horizon, m);
  return matcher.place_all();
}

struct OptBudget {
  int proof_cap = 16;                       // max n for exhaustive search
  std::uint64_t max_feasibility_tests = 200000;
};

struct OptResult {
  int best_count = 0;
  std::vector<int> witness;  // job ids, ascending
  std::uint64_t explored = 0;
  bool proven_optimal = false;
};

namespace detail {

struct OptSearch {
  const std::vector<Job>& jobs;
  int m;
  std::uint64_t budget;
  std::uint64_t tests = 0;
  std::uint64_t explored = 0;
  bool exhausted = false;
  int best = -1;
  std::vector<int> best_set;
  std::vector<int> current;
  std::vector<Job> scratch;

  bool feasible_with(int idx) {
    if (tests >= budget) {
      exhausted = true;
      return false;
    }
    ++tests;
    scratch.clear();
    for (int i : current) scratch.push_back(jobs[static_cast<std::size_t>(i)]);
    scratch.push_back(jobs[static_cast<std::size_t>(idx)]);
    return feasible_subset(scratch, m);
  }

  // Include-first DFS; every prefix on the current path is feasible, so any
  // leaf reached is a feasible witness. Extending an infeasible set is never
  // attempted (downward closure).
  void dfs(int idx) {
    ++explored;
    const int n = static_cast<int>(jobs.size());
    if (static_cast<int>(current.size()) + (n - idx) <= best) return;
    if (idx == n) {
      if (static_cast<int>(current.size()) > best) {
        best = static_cast<int>(current.size());
        best_set = current;
      }
      return;
    }
    if (!exhausted && feasible_with(idx)) {
      current.push_back(idx);
      dfs(idx + 1);
      current.pop_back();
    }
    dfs(idx + 1);
  }
};

}  // namespace detail

/// Exact |Opt(J, m)| by branch and bound over job subsets, largest
/// cardinality first. Returns a feasible witness; proven_optimal is true iff
/// the search ran to completion within budget. Instances beyond the proof
/// cap get a greedy feasible lower bound instead.
inline OptResult opt_throughput(const Instance& inst, int m,
                                const OptBudget& budget = {}) {
  OptResult res;
  const int n = static_cast<int>(inst.jobs.size());
  if (n == 0) {
    res.proven_optimal = true;
    return res;
  }
  if (n > budget.proof_cap) {
    // Greedy by ascending size, keeping each job that stays feasible.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Job& ja = inst.jobs[static_cast<std::size_t>(a)];
      const Job& jb = inst.jobs[static_cast<std::size_t>(b)];
      return ja.size != jb.size ? ja.size < jb.size : ja.id < jb.id;
    });
    std::vector<Job> kept;
    std::vector<int> ids;
    for (int i : order) {
      kept.push_back(inst.jobs[static_cast<std::size_t>(i)]);
      if (feasible_subset(kept, m)) {
        ids.push_back(inst.jobs[static_cast<std::size_t>(i)].id);
      } else {
        kept.pop_back();
      }
      ++res.explored;
    }
    std::sort(ids.begin(), ids.end());
    res.best_count = static_cast<int>(ids.size());
    res.witness = ids;
    res.proven_optimal = false;
    return res;
  }

  detail::OptSearch search{inst.jobs, m, budget.max_feasibility_tests};
  search.best = 0;
  search.dfs(0);
  res.best_count = search.best;
  res.witness.clear();
  for (int i : search.best_set)
    res.witness.push_back(inst.jobs[static_cast<std::size_t>(i)].id);
  std::sort(res.witness.begin(), res.witness.end());
  res.explored = search.explored;
  res.proven_optimal = !search.exhausted;
  return res;
}

/// Cheap sound bound on |Opt|: total completable work C (max flow over all
/// jobs at once) caps the size sum of any feasible set, so counting the
/// smallest sizes until C is exceeded bounds the cardinality.
inline int throughput_upper_bound(const Instance& inst, int m) {
  if (inst.jobs.empty()) return 0;
  std::vector<Tick> points;
  Tick capacity = 0;
  {
    std::vector<Job> all = inst.jobs;
    for (const Job& j : all) {
      points.push_back(j.release);
      points.push_back(j.deadline);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const int n = static_cast<int>(all.size());
    const int intervals = static_cast<int>(points.size()) - 1;
    const int source = 0;
    const int sink = 1 + n + intervals;
    FlowNetwork net(sink + 1);
    for (int i = 0; i < n; ++i)
      net.add_edge(source, 1 + i, all[static_cast<std::size_t>(i)].size);
    for (int k = 0; k < intervals; ++k) {
      const Tick len = points[static_cast<std::size_t>(k) + 1] -
                       points[static_cast<std::size_t>(k)];
      net.add_edge(1 + n + k, sink, static_cast<Tick>(m) * len);
      for (int i = 0; i < n; ++i) {
        const Job& j = all[static_cast<std::size_t>(i)];
        if (j.release <= points[static_cast<std::size_t>(k)] &&
            points[static_cast<std::size_t>(k) + 1] <= j.deadline)
          net.add_edge(1 + i, 1 + n + k, len);
      }
    }
    capacity = net.max_flow(source, sink);
  }
  std::vector<Tick> sizes;
  for (const Job& j : inst.jobs) sizes.push_back(j.size);
  std::sort(sizes.begin(), sizes.end());
  int count = 0;
  Tick acc = 0;
  for (Tick s : sizes) {
    if (acc + s > capacity) break;
    acc += s;
    ++count;
  }
  return count;
}

}  // namespace schedsim
