#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schedsim/cli.hpp"

using namespace schedsim;

int main(int argc, char** argv) {
  CLI::App app{"schedsim: online deadline-scheduling simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  cli::GenCmdOpts gen_opts;
  std::string gen_kind = "random";
  double ratio_lo = 0.0, ratio_hi = 1.0;
  bool have_seed = false;
  gen->add_option("--kind", gen_kind, "random|disagreeable|low_laxity|mixed");
  gen->add_option("--n", gen_opts.spec.n, "number of jobs")->required();
  gen->add_option("--m", gen_opts.spec.m, "machine count")->required();
  gen->add_option("--seed", gen_opts.spec.seed, "generator seed (required)")
      ->each([&](const std::string&) { have_seed = true; });
  gen->add_option("--horizon", gen_opts.spec.horizon, "release horizon");
  gen->add_option("--size-min", gen_opts.spec.size_lo, "minimum job size");
  gen->add_option("--size-max", gen_opts.spec.size_hi, "maximum job size");
  gen->add_option("--ratio-min", ratio_lo, "min laxity/size ratio");
  gen->add_option("--ratio-max", ratio_hi, "max laxity/size ratio");
  gen->add_option("--label", gen_opts.spec.label, "free-form label");
  gen->add_option("--out", gen_opts.out_path, "output .inst.json path");

  // run
  auto* run = app.add_subcommand("run", "simulate a policy on an instance");
  cli::RunCmdOpts run_opts;
  std::string run_policy_name = "srpt";
  int run_m = -1;
  run->add_option("--instance", run_opts.instance_path, "instance file")->required();
  run->add_option("--policy", run_policy_name, "srpt|mlax|lax_variant|final");
  run->add_option("--alpha", run_opts.run.alpha, "stack constant alpha");
  run->add_option("--m", run_m, "override machine count");
  run->add_option("--highlax", run_opts.run.highlax, "high-laxity scheduler name");
  run->add_flag("--with-opt", run_opts.with_opt, "also compute the offline optimum");
  run->add_option("--opt-cap", run_opts.opt_budget.proof_cap, "max n for exact opt");
  run->add_option("--trace-out", run_opts.trace_out, "write .trace.jsonl here");
  run->add_option("--summary-out", run_opts.summary_out, "write summary JSON here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of seeded runs, CSV output");
  cli::SweepCmdOpts sweep_opts;
  std::string sweep_kind = "random";
  std::vector<std::string> sweep_policies = {"srpt"};
  double sweep_ratio_lo = 0.0, sweep_ratio_hi = 1.0;
  bool sweep_have_seed = false;
  sweep->add_option("--kind", sweep_kind, "instance generator kind");
  sweep->add_option("--n", sweep_opts.base.n, "jobs per instance")->required();
  sweep->add_option("--horizon", sweep_opts.base.horizon, "release horizon");
  sweep->add_option("--size-min", sweep_opts.base.size_lo, "minimum job size");
  sweep->add_option("--size-max", sweep_opts.base.size_hi, "maximum job size");
  sweep->add_option("--ratio-min", sweep_ratio_lo, "min laxity/size ratio");
  sweep->add_option("--ratio-max", sweep_ratio_hi, "max laxity/size ratio");
  sweep->add_option("--m", sweep_opts.machines, "machine counts")->delimiter(',');
  sweep->add_option("--alpha", sweep_opts.alphas, "alpha values")->delimiter(',');
  sweep->add_option("--seed", sweep_opts.seed0, "first seed (required)")
      ->each([&](const std::string&) { sweep_have_seed = true; });
  sweep->add_option("--seeds", sweep_opts.num_seeds, "number of seeds");
  sweep->add_option("--policy", sweep_policies, "policies")->delimiter(',');
  sweep->add_flag("--with-opt", sweep_opts.with_opt, "compute opt per cell");
  sweep->add_option("--opt-cap", sweep_opts.opt_budget.proof_cap, "max n for exact opt");
  sweep->add_option("--jobs", sweep_opts.workers, "parallel workers");
  sweep->add_option("--out", sweep_opts.out_csv, "output CSV path");

  // opt
  auto* opt = app.add_subcommand("opt", "exact offline optimum for an instance");
  cli::OptCmdOpts opt_opts;
  int opt_m = -1;
  opt->add_option("--instance", opt_opts.instance_path, "instance file")->required();
  opt->add_option("--m", opt_m, "override machine count");
  opt->add_option("--cap", opt_opts.budget.proof_cap, "max n for exact search");
  opt->add_option("--out", opt_opts.out_path, "output JSON path");

  // validate
  auto* val = app.add_subcommand("validate", "check a trace against its instance");
  cli::ValidateCmdOpts val_opts;
  val->add_option("--instance", val_opts.instance_path, "instance file")->required();
  val->add_option("--trace", val_opts.trace_path, "trace file")->required();
  val->add_option("--out", val_opts.out_path, "report JSON path");

  // gantt
  auto* gantt = app.add_subcommand("gantt", "render a trace as SVG");
  cli::GanttCmdOpts gantt_opts;
  gantt->add_option("--trace", gantt_opts.trace_path, "trace file")->required();
  gantt->add_option("--out", gantt_opts.out_path, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      if (!have_seed) {
        std::cerr << "error: gen requires an explicit --seed\n";
        return 2;
      }
      gen_opts.spec.kind = parse_gen_kind(gen_kind);
      gen_opts.spec.lax_ratio_lo_pm = static_cast<int>(ratio_lo * 1000.0 + 0.5);
      gen_opts.spec.lax_ratio_hi_pm = static_cast<int>(ratio_hi * 1000.0 + 0.5);
      return cli::cmd_gen(gen_opts, std::cout, std::cerr);
    }
    if (run->parsed()) {
      run_opts.policy = parse_policy_kind(run_policy_name);
      if (run_m > 0) run_opts.machines_override = run_m;
      return cli::cmd_run(run_opts, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      if (!sweep_have_seed) {
        std::cerr << "error: sweep requires an explicit --seed\n";
        return 2;
      }
      sweep_opts.base.kind = parse_gen_kind(sweep_kind);
      sweep_opts.base.lax_ratio_lo_pm = static_cast<int>(sweep_ratio_lo * 1000.0 + 0.5);
      sweep_opts.base.lax_ratio_hi_pm = static_cast<int>(sweep_ratio_hi * 1000.0 + 0.5);
      sweep_opts.policies.clear();
      for (const std::string& p : sweep_policies)
        sweep_opts.policies.push_back(parse_policy_kind(p));
      return cli::cmd_sweep(sweep_opts, std::cout, std::cerr);
    }
    if (opt->parsed()) {
      if (opt_m > 0) opt_opts.machines_override = opt_m;
      return cli::cmd_opt(opt_opts, std::cout, std::cerr);
    }
    if (val->parsed()) return cli::cmd_validate(val_opts, std::cout, std::cerr);
    if (gantt->parsed()) return cli::cmd_gantt(gantt_opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
