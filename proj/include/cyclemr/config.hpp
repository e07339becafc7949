#pragma once

#include <cstdint>

#include "cyclemr/common.hpp"

namespace cyclemr {

// Model constants of one run. machines and memory_cap are resolved values;
// make_config derives them from n and epsilon.
struct Config {
  PointId n = 0;
  double epsilon = 0.5;
  std::uint32_t rho = 2;
  std::uint32_t rounds = 0;  // round budget R
  std::uint64_t seed = 1;
  std::uint32_t machines = 1;
  std::uint32_t memory_cap = 1;  // paths per machine
  double memory_factor = 1.0;
};

inline constexpr double kDefaultMemoryFactor = 4.0;
inline constexpr std::uint32_t kDefaultRoundBudget = 20000;

// ceil(n^(1-epsilon)), tolerant of floating-point noise on exact powers.
std::uint32_t sublinear_budget(PointId n, double epsilon);

// machines = ceil(n^(1-eps)), memory_cap = ceil(memory_factor * n^(1-eps)).
// Zero overrides mean "derive".
Config make_config(PointId n, double epsilon, std::uint32_t rho, std::uint64_t seed,
                   double memory_factor = kDefaultMemoryFactor, std::uint32_t rounds = kDefaultRoundBudget,
                   std::uint32_t machines_override = 0, std::uint32_t cap_override = 0);

// (epsilon/2) * log_rho(n); far below 1 at desk scale with rho = 1024/epsilon.
double analysis_round_count(PointId n, double epsilon, double rho);

// Shortest path that certifies a single cycle: strictly longer than the
// largest cycle any two-cycle labeling of the n+1 points can have.
constexpr std::uint32_t min_deciding_length(PointId n) noexcept { return (n + 2) / 2 + 1; }

}  // namespace cyclemr
