#pragma once

#include <memory>
#include <string>
#include <vector>

#include "schedsim/compose_final.hpp"
#include "schedsim/config.hpp"
#include "schedsim/engine.hpp"
#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/policy_highlax.hpp"
#include "schedsim/policy_mlax.hpp"
#include "schedsim/policy_srpt.hpp"
#include "schedsim/trace.hpp"
#include "schedsim/validate.hpp"

namespace schedsim {

enum class PolicyKind { kSrpt, kMlax, kLaxVariant, kFinal };

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kSrpt: return "srpt";
    case PolicyKind::kMlax: return "mlax";
    case PolicyKind::kLaxVariant: return "lax_variant";
    case PolicyKind::kFinal: return "final";
  }
  return "?";
}

inline PolicyKind parse_policy_kind(const std::string& s) {
  if (s == "srpt") return PolicyKind::kSrpt;
  if (s == "mlax") return PolicyKind::kMlax;
  if (s == "lax_variant") return PolicyKind::kLaxVariant;
  if (s == "final") return PolicyKind::kFinal;
  throw ConfigError("unknown policy: " + s);
}

struct RunOptions {
  Tick alpha = 24;
  Fraction viability_fraction{7, 8};
  Fraction replace_fraction{3, 4};
  std::string highlax = "admission_edf";
  EngineConfig engine;
};

struct RunStats {
  std::string policy;
  int completions = 0;  // physical completions by their deadline
  // Filled for the final composition only; -1 otherwise.
  int virtual_hi = -1;
  int virtual_srpt = -1;
  int virtual_mlax = -1;
  int pushes = 0;
  int replaces = 0;
  int completion_pops = 0;
  int infeasible_pops = 0;
  std::vector<int> admitted;
};

struct RunResult {
  Trace trace;
  RunStats stats;
};

inline MlaxConfig mlax_config_for(PolicyKind kind, const RunOptions& opts) {
  if (kind == PolicyKind::kLaxVariant) return lax_variant_config(opts.alpha);
  MlaxConfig cfg;
  cfg.alpha = opts.alpha;
  cfg.viability_fraction = opts.viability_fraction;
  cfg.replace_fraction = opts.replace_fraction;
  return cfg;
}

/// Number of stacks behind a stack-policy trace (for the replay checker).
inline int replay_stack_count(const TraceHeader& header) {
  if (header.policy == "final") return header.machines / 3;
  return header.machines;
}

inline RunResult run_policy(const Instance& inst, PolicyKind kind,
                            const RunOptions& opts = {}) {
  const int n = static_cast<int>(inst.jobs.size());
  const int m = inst.machines;
  const MlaxConfig cfg = mlax_config_for(kind, opts);

  std::unique_ptr<Policy> policy;
  FinalPolicy* final_policy = nullptr;
  switch (kind) {
    case PolicyKind::kSrpt:
      policy = std::make_unique<SrptPolicy>(m, n);
      break;
    case PolicyKind::kMlax:
    case PolicyKind::kLaxVariant:
      policy = std::make_unique<MlaxPolicy>(m, n, cfg);
      break;
    case PolicyKind::kFinal: {
      auto fp = std::make_unique<FinalPolicy>(m, n, cfg, opts.highlax);
      final_policy = fp.get();
      policy = std::move(fp);
      break;
    }
  }

  RunResult res;
  res.trace = simulate(inst, *policy, opts.engine);
  res.trace.header.policy = to_string(kind);
  res.trace.header.mlax = cfg;

  res.stats.policy = to_string(kind);
  for (const CompletionRec& c : res.trace.completions) {
    if (c.time <= inst.jobs[static_cast<std::size_t>(c.job)].deadline)
      ++res.stats.completions;
  }
  const StackCounters counters = stack_accounting(res.trace).counters;
  res.stats.pushes = counters.pushes;
  res.stats.replaces = counters.replaces;
  res.stats.completion_pops = counters.completion_pops;
  res.stats.infeasible_pops = counters.infeasible_pops;
  if (final_policy != nullptr) {
    res.stats.virtual_hi = final_policy->virtual_hi_completions();
    res.stats.virtual_srpt = final_policy->virtual_srpt_completions();
    res.stats.virtual_mlax = final_policy->virtual_mlax_completions();
    res.stats.admitted = final_policy->admitted_high_laxity();
  }
  return res;
}

/// Full post-hoc verification for a (instance, trace) pair: physical
/// validity always; stack accounting and the rule replay for stack-policy
/// traces. Machine binding is enforced for standalone stack policies, where
/// run intervals must equal the stack-top timeline.
inline ValidationReport verify_trace(const Instance& inst, const Trace& trace) {
  ValidationReport rep = validate_trace(inst, trace, trace.header.machines);
  const std::string& pol = trace.header.policy;
  const bool stack_policy = pol == "mlax" || pol == "lax_variant" || pol == "final";
  if (stack_policy) {
    const StackAccounting acc = stack_accounting(trace);
    if (!acc.balanced()) rep.add("stack-accounting", 0, *acc.violation);
    ReplayOptions ropts;
    ropts.check_machine_binding = pol != "final";
    ropts.low_laxity_only = pol == "final";
    ValidationReport replay =
        mlax_replay(inst, trace, replay_stack_count(trace.header), ropts);
    for (const Violation& v : replay.violations)
      rep.add(v.rule, v.time, v.detail);
    rep.stats = replay.stats;
  } else {
    rep.stats = stack_accounting(trace).counters;
  }
  return rep;
}

}  // namespace schedsim
