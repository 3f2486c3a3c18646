#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "schedsim/engine.hpp"
#include "schedsim/policy_srpt.hpp"
#include "schedsim/runner.hpp"

using namespace schedsim;
using schedsim::testing::raw;
using schedsim::testing::small_spec;

namespace {

std::set<int> selected_jobs(SrptPolicy& p, Tick t) {
  std::set<int> out;
  for (const RunEntry& e : p.run_set(t)) out.insert(e.job);
  return out;
}

}  // namespace

TEST_CASE("srpt picks the m shortest feasible jobs") {
  SrptPolicy p(2, 3);
  p.on_release({0, 0, 5, 100}, 0);
  p.on_release({1, 0, 2, 100}, 0);
  p.on_release({2, 0, 9, 100}, 0);
  CHECK(selected_jobs(p, 0) == std::set<int>{0, 1});  // remaining {2, 5}
}

TEST_CASE("fewer than m feasible jobs means all run") {
  SrptPolicy p(4, 1);
  p.on_release({0, 0, 3, 10}, 0);
  CHECK(selected_jobs(p, 0) == std::set<int>{0});
}

TEST_CASE("remaining ties break to the lower id") {
  SrptPolicy p(1, 2);
  p.on_release({0, 0, 4, 100}, 0);
  p.on_release({1, 0, 4, 100}, 0);
  CHECK(selected_jobs(p, 0) == std::set<int>{0});
}

// Exchange property, reconstructed purely from the trace: at every boundary
// no waiting feasible job is strictly shorter than a running one, and nobody
// feasible waits while a machine is free.
TEST_CASE("exchange property holds along random traces") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = generate(small_spec(seed, 14, 3));
    const RunResult r = run_policy(inst, PolicyKind::kSrpt);
    std::set<Tick> boundaries;
    for (const RunInterval& iv : r.trace.run_intervals) {
      boundaries.insert(iv.start);
      boundaries.insert(iv.end);
    }
    for (const Tick t : boundaries) {
      std::vector<Tick> processed(inst.jobs.size(), 0);
      std::set<int> running;
      for (const RunInterval& iv : r.trace.run_intervals) {
        if (iv.start < t)
          processed[static_cast<std::size_t>(iv.job)] +=
              std::min(iv.end, t) - iv.start;
        if (iv.start <= t && t < iv.end) running.insert(iv.job);
      }
      Tick max_running = -1;
      for (int j : running)
        max_running = std::max(max_running,
                               inst.jobs[static_cast<std::size_t>(j)].size -
                                   processed[static_cast<std::size_t>(j)]);
      int feasible_waiting = 0;
      Tick min_waiting = kInfTick;
      for (const Job& j : inst.jobs) {
        if (j.release > t || running.count(j.id) != 0) continue;
        const Tick rem = j.size - processed[static_cast<std::size_t>(j.id)];
        if (!is_feasible(rem, j.deadline, t)) continue;
        ++feasible_waiting;
        min_waiting = std::min(min_waiting, rem);
      }
      INFO("seed " << seed << " t=" << t);
      if (feasible_waiting > 0) {
        CHECK(static_cast<int>(running.size()) == inst.machines);
        CHECK(min_waiting >= max_running);
      }
    }
  }
}

TEST_CASE("running jobs stay feasible while they run") {
  for (std::uint64_t seed = 30; seed <= 40; ++seed) {
    const Instance inst = generate(small_spec(seed, 12, 2));
    const RunResult r = run_policy(inst, PolicyKind::kSrpt);
    std::map<int, Tick> processed;
    std::vector<RunInterval> ivs = r.trace.run_intervals;
    std::sort(ivs.begin(), ivs.end(), [](const RunInterval& a, const RunInterval& b) {
      return a.start < b.start;
    });
    for (const RunInterval& iv : ivs) {
      const Job& j = inst.jobs[static_cast<std::size_t>(iv.job)];
      const Tick rem_at_start = j.size - processed[iv.job];
      CHECK(iv.start + rem_at_start <= j.deadline);
      processed[iv.job] += iv.end - iv.start;
    }
  }
}
