#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclemr/config.hpp"
#include "cyclemr/instance.hpp"
#include "cyclemr/path.hpp"
#include "cyclemr/strategy.hpp"

namespace cyclemr {

enum class PlacementMode { round_robin, seeded_random, replicated };

struct Placement {
  PlacementMode mode = PlacementMode::round_robin;
  std::uint32_t replicas = 1;  // replicated only
  std::uint64_t seed = 0;      // seeded_random only
};

PlacementMode parse_placement(const std::string& name);
const char* placement_name(PlacementMode mode);

struct MachineState {
  MachineIndex index = 0;
  PathSet inbox;   // A^r_m
  PathSet outbox;  // A^{r,+}_m
};

enum class TraceLevel { summary, full };

struct MachineRecord {
  std::uint32_t inbox_count = 0;
  std::uint32_t path_count = 0;
  std::uint32_t max_len = 0;
  PathSet inbox;   // full traces only
  PathSet outbox;  // full traces only
};

struct RoundTrace {
  Round round = 0;
  std::vector<MachineRecord> machines;
  std::uint32_t max_len = 0;
  bool decided = false;
  bool aborted = false;  // memory exceeded in this round; outbox fields are empty
};

enum class Decision { single_cycle_evidence, undecided, memory_exceeded };
const char* decision_name(Decision d);

struct MemoryViolation {
  Round round = 0;
  MachineIndex machine = 0;
  std::uint64_t inbox = 0;
  std::uint32_t cap = 0;
};

using RouteObserver =
    std::function<void(Round round, MachineIndex machine, const Path& path, std::span<const MachineIndex> targets)>;

struct RunOptions {
  Placement placement;
  TraceLevel trace = TraceLevel::summary;
  bool stop_on_decision = true;
  // Stop early once every cycle is fully known and still too short to decide.
  bool stop_when_saturated = false;
  bool keep_history_tree = false;
  std::uint32_t rounds = 0;  // 0: use Config::rounds
  RouteObserver observer;
};

// Paths in the result point into the instance passed to run(); keep it alive.
struct RunResult {
  std::vector<RoundTrace> rounds;
  Decision decision = Decision::undecided;
  Round decision_round = 0;
  std::optional<MemoryViolation> violation;
  bool saturated = false;
};

// A^1: initial points per machine. Throws CapacityInfeasible when a machine
// would exceed the memory cap.
std::vector<MachineState> init_placement(const Instance& instance, const Config& config, const Placement& placement,
                                         bool keep_history_tree = false);

struct RoundOutcome {
  std::optional<MemoryViolation> violation;
};

// Round 1 reduces the placed inboxes; later rounds first route every outbox
// path through the strategy, shuffle, check memory, then reduce.
RoundOutcome run_round(std::vector<MachineState>& states, const Strategy& strategy, const Instance& instance,
                       Round round, const Config& config, const RouteObserver* observer = nullptr);

RunResult run(const Instance& instance, const Strategy& strategy, const Config& config, const RunOptions& options = {});

// Per-round maximum path length over all machines.
std::vector<std::uint32_t> max_lengths(const RunResult& result);

// Applies CYCLEMR_THREADS (if set) to the OpenMP runtime; returns the thread count in effect.
int configure_threads_from_env();

}  // namespace cyclemr
