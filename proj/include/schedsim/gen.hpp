#pragma once

#include <string>
#include <vector>

#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/rng.hpp"

namespace schedsim {

enum class GenKind { kRandom, kDisagreeable, kLowLaxity, kMixed };

inline GenKind parse_gen_kind(const std::string& s) {
  if (s == "random") return GenKind::kRandom;
  if (s == "disagreeable") return GenKind::kDisagreeable;
  if (s == "low_laxity") return GenKind::kLowLaxity;
  if (s == "mixed") return GenKind::kMixed;
  throw SpecError("unknown generator kind: " + s);
}

/// Seeded generator spec. Laxity ratios are expressed in permille so that
/// generation stays on integer arithmetic; laxity = size * ratio / 1000.
struct GenSpec {
  GenKind kind = GenKind::kRandom;
  int n = 0;
  int m = 1;
  std::uint64_t seed = 0;
  Tick horizon = 100;           // releases fall in [0, horizon]
  Tick size_lo = 1;
  Tick size_hi = 10;
  int lax_ratio_lo_pm = 0;      // permille of size
  int lax_ratio_hi_pm = 1000;
  std::string label;

  friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

namespace detail {

// Stream tags keep the per-field draws independent of each other.
enum : std::uint64_t { kStreamRelease = 1, kStreamSize = 2, kStreamRatio = 3 };

inline void check_common(const GenSpec& spec) {
  if (spec.n < 0) throw SpecError("n must be >= 0");
  if (spec.m < 1) throw SpecError("m must be >= 1");
  if (spec.horizon < 0) throw SpecError("horizon must be >= 0");
  if (spec.size_lo < 1 || spec.size_hi < spec.size_lo)
    throw SpecError("empty size range");
  if (spec.lax_ratio_lo_pm < 0 || spec.lax_ratio_hi_pm < spec.lax_ratio_lo_pm)
    throw SpecError("empty laxity ratio range");
}

inline Job draw_job(const GenSpec& spec, int index, int ratio_cap_pm = -1) {
  CounterRng rel(spec.seed, kStreamRelease * 1000003ULL + static_cast<std::uint64_t>(index));
  CounterRng siz(spec.seed, kStreamSize * 1000003ULL + static_cast<std::uint64_t>(index));
  CounterRng rat(spec.seed, kStreamRatio * 1000003ULL + static_cast<std::uint64_t>(index));
  Job j;
  j.id = index;
  j.release = rel.uniform(0, spec.horizon);
  j.size = siz.uniform(spec.size_lo, spec.size_hi);
  int lo = spec.lax_ratio_lo_pm, hi = spec.lax_ratio_hi_pm;
  if (ratio_cap_pm >= 0) {
    lo = std::min(lo, ratio_cap_pm);
    hi = std::min(hi, ratio_cap_pm);
  }
  const Tick ratio_pm = rat.uniform(lo, hi);
  const Tick lax = j.size * ratio_pm / 1000;
  j.deadline = j.release + j.size + lax;
  return j;
}

}  // namespace detail

/// Uniform releases over [0, horizon], sizes over the size range, laxity a
/// ratio of size drawn from the ratio range. Deterministic in the seed.
inline Instance gen_random(const GenSpec& spec) {
  detail::check_common(spec);
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) jobs.push_back(detail::draw_job(spec, i));
  return make_instance(std::move(jobs), spec.m, spec.label, spec.seed);
}

/// Strictly increasing releases with strictly decreasing deadlines (nested
/// windows), every job low-laxity. Output sorted by release.
inline Instance gen_disagreeable(const GenSpec& spec) {
  detail::check_common(spec);
  if (spec.n < 1) throw SpecError("disagreeable: n must be >= 1");
  // Window i is [i, horizon + 2n - i); nesting needs distinct endpoints on
  // both sides.
  const Tick span = spec.horizon + 2 * static_cast<Tick>(spec.n);
  if (span - 2 * static_cast<Tick>(spec.n - 1) - static_cast<Tick>(spec.n) < 1)
    throw SpecError("disagreeable: horizon too small to nest " +
                    std::to_string(spec.n) + " windows");
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    CounterRng rng(spec.seed, detail::kStreamSize * 1000003ULL +
                                  static_cast<std::uint64_t>(i));
    Job j;
    j.id = i;
    j.release = i;
    j.deadline = span - i;
    const Tick window = j.deadline - j.release;
    // Low laxity: size at least half the window (so laxity <= size).
    const Tick min_size = (window + 1) / 2;
    j.size = min_size + rng.uniform(0, std::max<Tick>(0, window - min_size));
    jobs.push_back(j);
  }
  return make_instance(std::move(jobs), spec.m, spec.label, spec.seed);
}

/// Every job satisfies laxity <= size; the ratio range is capped at 1000
/// permille and must not start above it.
inline Instance gen_low_laxity(const GenSpec& spec) {
  detail::check_common(spec);
  if (spec.lax_ratio_hi_pm > 1000)
    throw SpecError("low_laxity: ratio above 1 violates the laxity class");
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i)
    jobs.push_back(detail::draw_job(spec, i, /*ratio_cap_pm=*/1000));
  return make_instance(std::move(jobs), spec.m, spec.label, spec.seed);
}

/// Alternating laxity classes: even indices low (ratio capped at 1), odd
/// indices high (ratio forced above 1).
inline Instance gen_mixed(const GenSpec& spec) {
  detail::check_common(spec);
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    if (i % 2 == 0) {
      jobs.push_back(detail::draw_job(spec, i, /*ratio_cap_pm=*/1000));
    } else {
      Job j = detail::draw_job(spec, i);
      CounterRng rng(spec.seed, detail::kStreamRatio * 2000003ULL +
                                    static_cast<std::uint64_t>(i));
      const Tick lax = j.size * rng.uniform(1001, 3000) / 1000 + 1;
      j.deadline = j.release + j.size + lax;
      jobs.push_back(j);
    }
  }
  return make_instance(std::move(jobs), spec.m, spec.label, spec.seed);
}

inline Instance generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::kRandom: return gen_random(spec);
    case GenKind::kDisagreeable: return gen_disagreeable(spec);
    case GenKind::kLowLaxity: return gen_low_laxity(spec);
    case GenKind::kMixed: return gen_mixed(spec);
  }
  throw SpecError("unknown generator kind");
}

}  // namespace schedsim
