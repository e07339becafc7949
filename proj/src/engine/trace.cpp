#include "cyclemr/trace.hpp"

#include <istream>
#include <ostream>

namespace cyclemr {

ojson provenance_header(const ojson& resolved_config, std::uint64_t master_seed) {
  ojson h;
  h["type"] = "header";
  h["tool"] = kToolVersion;
  h["master_seed"] = master_seed;
  h["config"] = resolved_config;
  return h;
}

void write_jsonl(std::ostream& out, const ojson& record) { out << record.dump() << '\n'; }

namespace {

ojson dump_set(const PathSet& set) {
  ojson arr = ojson::array();
  for (const Path& p : set) arr.push_back(p.debug_string());
  return arr;
}

}  // namespace

void write_trace(std::ostream& out, const RunResult& result, const std::string& run_id, bool verbose) {
  for (const RoundTrace& t : result.rounds) {
    for (std::size_t m = 0; m < t.machines.size(); ++m) {
      const MachineRecord& rec = t.machines[m];
      ojson j;
      j["run_id"] = run_id;
      j["round"] = t.round;
      j["machine"] = m;
      j["path_count"] = rec.path_count;
      j["max_len"] = rec.max_len;
      j["decided"] = t.decided;
      j["inbox_count"] = rec.inbox_count;
      if (verbose) {
        j["inbox"] = dump_set(rec.inbox);
        j["outbox"] = dump_set(rec.outbox);
      }
      write_jsonl(out, j);
    }
  }
  if (result.violation) {
    ojson e;
    e["run_id"] = run_id;
    e["event"] = "memory_exceeded";
    e["round"] = result.violation->round;
    e["machine"] = result.violation->machine;
    e["inbox"] = result.violation->inbox;
    e["cap"] = result.violation->cap;
    write_jsonl(out, e);
  }
}

std::vector<std::uint32_t> read_trace_max_lengths(std::istream& in) {
  std::vector<std::uint32_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ojson j = ojson::parse(line);
    if (j.contains("type") || j.contains("event")) continue;
    const auto r = j.at("round").get<std::uint32_t>();
    if (r == 0) throw CycleError(Errc::parse_error, "round 0 in trace");
    if (out.size() < r) out.resize(r, 0);
    out[r - 1] = std::max(out[r - 1], j.at("max_len").get<std::uint32_t>());
  }
  return out;
}

}  // namespace cyclemr
