#pragma once

#include <array>
#include <vector>

#include "schedsim/gen.hpp"
#include "schedsim/job.hpp"

namespace schedsim::testing {

/// Raw-tick fixture instance; ids are assigned in order. Callers keep
/// laxities even when the instance will drive a stack policy.
inline Instance raw(const std::vector<std::array<Tick, 3>>& rxd, int machines) {
  std::vector<Job> jobs;
  int id = 0;
  for (const auto& [r, x, d] : rxd) jobs.push_back({id++, r, x, d});
  return make_raw_instance(std::move(jobs), machines);
}

inline GenSpec small_spec(std::uint64_t seed, int n, int m, GenKind kind = GenKind::kMixed) {
  GenSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.m = m;
  spec.seed = seed;
  spec.horizon = 40;
  spec.size_lo = 1;
  spec.size_hi = 8;
  spec.lax_ratio_lo_pm = 0;
  spec.lax_ratio_hi_pm = 1000;
  return spec;
}

}  // namespace schedsim::testing
