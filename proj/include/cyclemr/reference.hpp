#pragma once

#include <cstdint>
#include <vector>

#include "cyclemr/engine.hpp"

// Straight-line serial evaluation of the model used to cross-check the engine.
// Paths are plain ID vectors, components are found by pairwise tests.
namespace cyclemr::reference {

struct RefPath {
  std::vector<PointId> ids;
  std::uint64_t digest = 0;
  friend auto operator<=>(const RefPath&, const RefPath&) = default;
};

struct RefMachine {
  std::vector<RefPath> inbox;
  std::vector<RefPath> outbox;
};

struct RefRound {
  Round round = 0;
  std::vector<RefMachine> machines;
  std::uint32_t max_len = 0;
  bool decided = false;
  bool aborted = false;
};

struct RefResult {
  std::vector<RefRound> rounds;
  Decision decision = Decision::undecided;
  Round decision_round = 0;
};

std::vector<RefPath> reduce(const Instance& instance, std::vector<RefPath> paths, Round round, MachineIndex machine);

RefResult run(const Instance& instance, const Strategy& strategy, const Config& config, const Placement& placement,
              std::uint32_t rounds, bool stop_on_decision = true);

// Engine path -> reference form, for comparisons.
RefPath to_ref(const Path& p);

}  // namespace cyclemr::reference
