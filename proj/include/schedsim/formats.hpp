#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"
#include "schedsim/oracle.hpp"
#include "schedsim/trace.hpp"
#include "schedsim/validate.hpp"

namespace schedsim {

using json = nlohmann::ordered_json;

// Exact field names for all on-disk formats are frozen in FORMAT.md.

namespace detail {

inline void reject_unknown_fields(const json& obj, std::vector<std::string> allowed,
                                  const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError(where + ": unknown field '" + key + "'");
  }
}

inline std::string hash_to_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline std::uint64_t hex_to_hash(const std::string& s) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos, 16);
    if (pos != s.size()) throw ParseError("bad instance_hash: " + s);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad instance_hash: " + s);
  }
}

}  // namespace detail

/// Parse an instance file (original, pre-doubled ticks) and ingest it onto
/// the internal doubled grid. Unknown fields are rejected.
inline Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("instance: top level must be an object");
    detail::reject_unknown_fields(doc, {"version", "machines", "label", "seed", "jobs"},
                                  "instance");
    for (const char* field : {"version", "machines", "jobs"})
      if (!doc.contains(field))
        throw ParseError(std::string("instance: missing field '") + field + "'");
    if (doc["version"].get<int>() != 1)
      throw ParseError("instance: unsupported version");
    std::vector<Job> jobs;
    std::size_t line = 0;
    for (const auto& jj : doc["jobs"]) {
      const std::string where = "instance: jobs[" + std::to_string(line++) + "]";
      if (!jj.is_object()) throw ParseError(where + ": must be an object");
      detail::reject_unknown_fields(jj, {"id", "release", "size", "deadline"}, where);
      for (const char* field : {"id", "release", "size", "deadline"})
        if (!jj.contains(field))
          throw ParseError(where + ": missing field '" + field + "'");
      jobs.push_back({jj["id"].get<int>(), jj["release"].get<Tick>(),
                      jj["size"].get<Tick>(), jj["deadline"].get<Tick>()});
    }
    std::optional<std::uint64_t> seed;
    if (doc.contains("seed")) seed = doc["seed"].get<std::uint64_t>();
    std::string label = doc.contains("label") ? doc["label"].get<std::string>() : "";
    return make_instance(std::move(jobs), doc["machines"].get<int>(),
                         std::move(label), seed);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

/// Serialize back to original ticks. Deterministic byte output.
inline std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["version"] = 1;
  doc["machines"] = inst.machines;
  if (!inst.label.empty()) doc["label"] = inst.label;
  if (inst.seed.has_value()) doc["seed"] = *inst.seed;
  json jobs = json::array();
  std::vector<Job> sorted = inst.jobs;
  std::sort(sorted.begin(), sorted.end(),
            [](const Job& a, const Job& b) { return a.id < b.id; });
  const Tick scale = inst.tick_scale;
  for (const Job& j : sorted) {
    json jj;
    jj["id"] = j.id;
    jj["release"] = j.release / scale;
    jj["size"] = j.size / scale;
    jj["deadline"] = j.deadline / scale;
    jobs.push_back(std::move(jj));
  }
  doc["jobs"] = std::move(jobs);
  return doc.dump(2) + "\n";
}

namespace detail {

inline int trace_kind_rank(const std::string& kind) {
  if (kind == "completion") return 0;
  if (kind == "run") return 1;
  if (kind == "pseudo_release") return 2;
  if (kind == "push") return 3;
  if (kind == "replace") return 4;
  if (kind == "completion_pop") return 5;
  if (kind == "infeasible_pop") return 6;
  if (kind == "window_expiry") return 7;
  return 8;
}

struct TraceLine {
  Tick t;
  int rank;
  int job;
  std::uint64_t seq;
  std::string text;
};

}  // namespace detail

/// One JSON object per line: a header, then events sorted by
/// (t, kind order, job id, seq). `seq` preserves the emission order that
/// same-instant stack operations depend on.
inline std::string serialize_trace(const Trace& trace) {
  json head;
  head["format"] = "schedsim.trace";
  head["version"] = 1;
  head["instance_hash"] = detail::hash_to_hex(trace.header.instance_hash);
  head["machines"] = trace.header.machines;
  head["tick_scale"] = trace.header.tick_scale;
  head["policy"] = trace.header.policy;
  head["alpha"] = trace.header.mlax.alpha;
  head["viability"] = {trace.header.mlax.viability_fraction.num,
                       trace.header.mlax.viability_fraction.den};
  head["replace"] = {trace.header.mlax.replace_fraction.num,
                     trace.header.mlax.replace_fraction.den};
  head["variant"] = to_string(trace.header.mlax.variant);

  std::vector<detail::TraceLine> lines;
  lines.reserve(trace.run_intervals.size() + trace.completions.size() +
                trace.stack_events.size());
  for (const RunInterval& iv : trace.run_intervals) {
    json e;
    e["t"] = iv.start;
    e["kind"] = "run";
    e["job"] = iv.job;
    e["machine"] = iv.machine;
    e["extra"] = {{"end", iv.end}, {"seq", iv.seq}};
    lines.push_back({iv.start, 1, iv.job, iv.seq, e.dump()});
  }
  for (const CompletionRec& c : trace.completions) {
    json e;
    e["t"] = c.time;
    e["kind"] = "completion";
    e["job"] = c.job;
    e["machine"] = -1;
    e["extra"] = {{"seq", c.seq}};
    lines.push_back({c.time, 0, c.job, c.seq, e.dump()});
  }
  for (const StackEvent& ev : trace.stack_events) {
    json e;
    e["t"] = ev.time;
    const std::string kind = to_string(ev.kind);
    e["kind"] = kind;
    e["job"] = ev.job;
    e["machine"] = ev.stack;
    if (ev.kind == StackEventKind::kReplace)
      e["extra"] = {{"evicted", ev.evicted}, {"seq", ev.seq}};
    else
      e["extra"] = {{"seq", ev.seq}};
    lines.push_back({ev.time, detail::trace_kind_rank(kind), ev.job, ev.seq, e.dump()});
  }
  std::sort(lines.begin(), lines.end(),
            [](const detail::TraceLine& a, const detail::TraceLine& b) {
              if (a.t != b.t) return a.t < b.t;
              if (a.rank != b.rank) return a.rank < b.rank;
              if (a.job != b.job) return a.job < b.job;
              return a.seq < b.seq;
            });
  std::ostringstream os;
  os << head.dump() << "\n";
  for (const auto& l : lines) os << l.text << "\n";
  return os.str();
}

namespace detail {

inline void parse_trace_header(const json& doc, TraceHeader& header) {
  if (!doc.contains("format") || doc["format"] != "schedsim.trace")
    throw ParseError("trace line 1: missing schedsim.trace header");
  header.instance_hash = hex_to_hash(doc.at("instance_hash").get<std::string>());
  header.machines = doc.at("machines").get<int>();
  header.tick_scale = doc.at("tick_scale").get<int>();
  header.policy = doc.at("policy").get<std::string>();
  header.mlax.alpha = doc.at("alpha").get<Tick>();
  header.mlax.viability_fraction = {doc.at("viability").at(0).get<int>(),
                                    doc.at("viability").at(1).get<int>()};
  header.mlax.replace_fraction = {doc.at("replace").at(0).get<int>(),
                                  doc.at("replace").at(1).get<int>()};
  header.mlax.variant = doc.at("variant") == "lax_variant"
                            ? MlaxVariant::kLaxVariant
                            : MlaxVariant::kMlax;
}

inline void parse_trace_event(const json& doc, Trace& trace,
                              const std::string& where) {
  for (const char* field : {"t", "kind", "job", "machine", "extra"})
    if (!doc.contains(field))
      throw ParseError(where + ": missing field '" + field + "'");
  const std::string kind = doc.at("kind").get<std::string>();
  const Tick t = doc.at("t").get<Tick>();
  const int job = doc.at("job").get<int>();
  const int machine = doc.at("machine").get<int>();
  const std::uint64_t seq = doc.at("extra").at("seq").get<std::uint64_t>();
  if (kind == "run") {
    trace.run_intervals.push_back(
        {machine, job, t, doc.at("extra").at("end").get<Tick>(), seq});
  } else if (kind == "completion") {
    trace.completions.push_back({job, t, seq});
  } else {
    StackEvent ev;
    ev.time = t;
    ev.job = job;
    ev.stack = machine;
    ev.seq = seq;
    if (kind == "pseudo_release") ev.kind = StackEventKind::kPseudoRelease;
    else if (kind == "push") ev.kind = StackEventKind::kPush;
    else if (kind == "replace") ev.kind = StackEventKind::kReplace;
    else if (kind == "completion_pop") ev.kind = StackEventKind::kCompletionPop;
    else if (kind == "infeasible_pop") ev.kind = StackEventKind::kInfeasiblePop;
    else if (kind == "window_expiry") ev.kind = StackEventKind::kWindowExpiry;
    else throw ParseError(where + ": unknown kind '" + kind + "'");
    if (ev.kind == StackEventKind::kReplace)
      ev.evicted = doc.at("extra").at("evicted").get<int>();
    trace.stack_events.push_back(ev);
  }
}

}  // namespace detail

inline Trace parse_trace(const std::string& text) {
  Trace trace;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (!have_header) {
        detail::parse_trace_header(doc, trace.header);
        have_header = true;
      } else {
        detail::parse_trace_event(doc, trace,
                                  "trace line " + std::to_string(lineno));
      }
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError("trace: empty file");
  const auto by_seq = [](const auto& a, const auto& b) { return a.seq < b.seq; };
  std::sort(trace.run_intervals.begin(), trace.run_intervals.end(), by_seq);
  std::sort(trace.completions.begin(), trace.completions.end(), by_seq);
  std::sort(trace.stack_events.begin(), trace.stack_events.end(), by_seq);
  std::uint64_t max_seq = 0;
  for (const auto& v : trace.run_intervals) max_seq = std::max(max_seq, v.seq + 1);
  for (const auto& v : trace.completions) max_seq = std::max(max_seq, v.seq + 1);
  for (const auto& v : trace.stack_events) max_seq = std::max(max_seq, v.seq + 1);
  trace.next_seq = max_seq;
  return trace;
}

inline std::string report_to_json(const ValidationReport& rep) {
  json doc;
  doc["ok"] = rep.ok;
  json v = json::array();
  for (const Violation& x : rep.violations)
    v.push_back({{"rule", x.rule}, {"time", x.time}, {"detail", x.detail}});
  doc["violations"] = std::move(v);
  doc["stats"] = {{"pushes", rep.stats.pushes},
                  {"replaces", rep.stats.replaces},
                  {"completion_pops", rep.stats.completion_pops},
                  {"infeasible_pops", rep.stats.infeasible_pops},
                  {"pseudo_releases", rep.stats.pseudo_releases},
                  {"window_expiries", rep.stats.window_expiries}};
  return doc.dump(2) + "\n";
}

inline std::string opt_to_json(const OptResult& res) {
  json doc;
  doc["best_count"] = res.best_count;
  doc["witness_ids"] = res.witness;
  doc["proven_optimal"] = res.proven_optimal;
  return doc.dump(2) + "\n";
}

}  // namespace schedsim
