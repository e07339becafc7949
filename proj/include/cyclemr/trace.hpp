#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclemr/engine.hpp"

namespace cyclemr {

using ojson = nlohmann::ordered_json;

// Tool version echoed into every artifact header.
inline constexpr const char* kToolVersion = "cyclemr 1.0.0";

// First line of every JSONL artifact: {"type":"header","tool":...,"config":{...}}.
ojson provenance_header(const ojson& resolved_config, std::uint64_t master_seed);
void write_jsonl(std::ostream& out, const ojson& record);

// One record per (round, machine); a memory_exceeded event closes aborted runs.
// With `verbose`, each record also carries the inbox/outbox path dumps.
void write_trace(std::ostream& out, const RunResult& result, const std::string& run_id, bool verbose);

// Per-round max path length recomputed from a trace stream (header and event lines skipped).
std::vector<std::uint32_t> read_trace_max_lengths(std::istream& in);

}  // namespace cyclemr
