#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "schedsim/cli.hpp"

using namespace schedsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("schedsim_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

cli::GenCmdOpts demo_gen(const TempDir& dir, std::uint64_t seed = 11) {
  cli::GenCmdOpts g;
  g.spec = schedsim::testing::small_spec(seed, 10, 4, GenKind::kMixed);
  g.out_path = dir.file("demo.inst.json");
  return g;
}

}  // namespace

TEST_CASE("gen writes a parseable, reproducible instance") {
  TempDir dir;
  std::ostringstream out, err;
  const cli::GenCmdOpts g = demo_gen(dir);
  REQUIRE(cli::cmd_gen(g, out, err) == 0);
  const std::string once = cli::read_file(g.out_path);
  REQUIRE(cli::cmd_gen(g, out, err) == 0);
  CHECK(cli::read_file(g.out_path) == once);
  CHECK(parse_instance(once).jobs.size() == 10);
}

TEST_CASE("run produces a validating trace and a summary") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_gen(demo_gen(dir), out, err) == 0);

  cli::RunCmdOpts r;
  r.instance_path = dir.file("demo.inst.json");
  r.policy = PolicyKind::kMlax;
  r.trace_out = dir.file("demo.trace.jsonl");
  r.with_opt = true;
  REQUIRE(cli::cmd_run(r, out, err) == 0);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["policy"] == "mlax");
  CHECK(summary.contains("completions"));
  CHECK(summary.contains("opt"));
  CHECK(summary["opt_kind"] == "exact");

  cli::ValidateCmdOpts v;
  v.instance_path = r.instance_path;
  v.trace_path = r.trace_out;
  std::ostringstream vout;
  CHECK(cli::cmd_validate(v, vout, err) == 0);

  cli::GanttCmdOpts gnt;
  gnt.trace_path = r.trace_out;
  gnt.out_path = dir.file("demo.svg");
  CHECK(cli::cmd_gantt(gnt, out, err) == 0);
  CHECK(cli::read_file(gnt.out_path).find("<svg") != std::string::npos);
}

TEST_CASE("run exits 2 on a missing instance file") {
  std::ostringstream out, err;
  cli::RunCmdOpts r;
  r.instance_path = "/nonexistent/u.inst.json";
  CHECK(cli::cmd_run(r, out, err) == 2);
  CHECK(err.str().find("error:") != std::string::npos);
}

TEST_CASE("final below the guarantee regime warns but runs") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_gen(demo_gen(dir), out, err) == 0);
  cli::RunCmdOpts r;
  r.instance_path = dir.file("demo.inst.json");
  r.policy = PolicyKind::kFinal;
  r.machines_override = 4;
  CHECK(cli::cmd_run(r, out, err) == 0);
  CHECK(err.str().find("m >= 48") != std::string::npos);
}

TEST_CASE("final on fewer than three machines is a usage error") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_gen(demo_gen(dir), out, err) == 0);
  cli::RunCmdOpts r;
  r.instance_path = dir.file("demo.inst.json");
  r.policy = PolicyKind::kFinal;
  r.machines_override = 2;
  CHECK(cli::cmd_run(r, out, err) == 2);
}

TEST_CASE("validate flags a tampered trace and a wrong instance") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_gen(demo_gen(dir), out, err) == 0);
  cli::RunCmdOpts r;
  r.instance_path = dir.file("demo.inst.json");
  r.policy = PolicyKind::kSrpt;
  r.trace_out = dir.file("t.trace.jsonl");
  REQUIRE(cli::cmd_run(r, out, err) == 0);

  // A different instance: hash mismatch.
  cli::GenCmdOpts other = demo_gen(dir, 12);
  other.out_path = dir.file("other.inst.json");
  REQUIRE(cli::cmd_gen(other, out, err) == 0);
  cli::ValidateCmdOpts v;
  v.instance_path = other.out_path;
  v.trace_path = r.trace_out;
  std::ostringstream vout;
  CHECK(cli::cmd_validate(v, vout, err) == 1);
  CHECK(vout.str().find("instance-hash") != std::string::npos);

  // Tamper with an interval end inside the trace file.
  std::string text = cli::read_file(r.trace_out);
  const auto pos = text.find("\"end\":");
  REQUIRE(pos != std::string::npos);
  text[pos + 6] = '9';
  cli::write_file(dir.file("bad.trace.jsonl"), text);
  v.instance_path = r.instance_path;
  v.trace_path = dir.file("bad.trace.jsonl");
  std::ostringstream vout2;
  CHECK(cli::cmd_validate(v, vout2, err) == 1);
}

TEST_CASE("sweep emits one row per cell plus the ratio footer") {
  std::ostringstream out, err;
  cli::SweepCmdOpts s;
  s.base = schedsim::testing::small_spec(0, 8, 0, GenKind::kMixed);
  s.machines = {4, 6};
  s.alphas = {8, 24, 64};
  s.seed0 = 5;
  s.num_seeds = 2;
  s.policies = {PolicyKind::kSrpt, PolicyKind::kFinal};
  s.with_opt = true;
  s.workers = 3;
  REQUIRE(cli::cmd_sweep(s, out, err) == 0);
  std::istringstream is(out.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == cli::kSweepCsvHeader);
  int rows = 0, footers = 0, errors = 0;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++footers;
      continue;
    }
    ++rows;
    if (line.find(",error,") != std::string::npos) ++errors;
  }
  CHECK(rows == 2 * 2 * 3 * 2);
  CHECK(footers == 2);  // min and mean ratio
  CHECK(errors == 0);

  // Deterministic regardless of worker count.
  std::ostringstream serial;
  s.workers = 1;
  REQUIRE(cli::cmd_sweep(s, serial, err) == 0);
  CHECK(serial.str() == out.str());
}

TEST_CASE("sweep records per-cell failures and keeps going") {
  std::ostringstream out, err;
  cli::SweepCmdOpts s;
  s.base = schedsim::testing::small_spec(0, 6, 0, GenKind::kMixed);
  s.machines = {2};  // final cannot run on 2 machines
  s.alphas = {24};
  s.seed0 = 1;
  s.num_seeds = 2;
  s.policies = {PolicyKind::kSrpt, PolicyKind::kFinal};
  REQUIRE(cli::cmd_sweep(s, out, err) == 0);
  std::istringstream is(out.str());
  std::string line;
  std::getline(is, line);
  int ok_rows = 0, error_rows = 0;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    if (line.find(",ok,") != std::string::npos) ++ok_rows;
    if (line.find(",error,") != std::string::npos) ++error_rows;
  }
  CHECK(ok_rows == 2);
  CHECK(error_rows == 2);
}

TEST_CASE("opt command emits the result json") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_gen(demo_gen(dir), out, err) == 0);
  cli::OptCmdOpts o;
  o.instance_path = dir.file("demo.inst.json");
  std::ostringstream oout;
  REQUIRE(cli::cmd_opt(o, oout, err) == 0);
  const auto doc = nlohmann::json::parse(oout.str());
  CHECK(doc.contains("best_count"));
  CHECK(doc.contains("witness_ids"));
  CHECK(doc["proven_optimal"] == true);
}
