#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclemr/engine.hpp"
#include "cyclemr/trace.hpp"

namespace cyclemr {

enum class Family { one_cycle, two_cycle, mixed };
Family parse_family(const std::string& name);
const char* family_name(Family f);

struct SweepSpec {
  std::vector<PointId> ns;
  double epsilon = 0.5;
  std::uint32_t rho = 2;
  std::vector<std::string> strategies{"endpoint-hash"};
  std::uint32_t seeds = 10;
  std::vector<Family> families{Family::one_cycle};
  std::uint32_t rounds = kDefaultRoundBudget;
  std::uint64_t master_seed = 1;
  double memory_factor = kDefaultMemoryFactor;
  std::uint32_t machines = 0;  // overrides, 0 = derive
  std::uint32_t memory_cap = 0;
  std::uint32_t copies = 3;  // replicating-hash
  Placement placement;
  bool strict = true;  // n must be a power of rho; otherwise rounded with a warning
};

struct CellResult {
  PointId n = 0;
  std::string strategy;
  Family family = Family::one_cycle;
  std::uint32_t seeds = 0;
  std::uint32_t aborted = 0;   // memory exceeded
  std::uint32_t samples = 0;   // seeds - aborted
  std::uint32_t decided = 0;
  std::uint32_t misclassified = 0;  // decided on a two-cycle instance
  double decided_frac = 0;
  std::optional<double> round_p25, round_p50, round_p75, round_mean;
  std::optional<double> growth_p99;
  std::optional<double> slope_so_far;
  std::vector<Round> decision_rounds;  // decided runs, seed order
};

struct LogFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
};

struct SweepResult {
  std::vector<CellResult> cells;
  std::vector<std::string> warnings;
};

SweepResult run_sweep(const SweepSpec& spec);

// Least squares of median decision round on log2 n over the decided cells
// (optionally of one strategy/family). Underdetermined with fewer than 3.
LogFit fit_log(const SweepResult& result, const std::string& strategy = "",
               std::optional<Family> family = std::nullopt);
LogFit fit_log(const std::vector<double>& log2n, const std::vector<double>& rounds);

// Linear-interpolation quantile of a sorted sample, q in [0,1].
double quantile(const std::vector<double>& sorted, double q);

inline constexpr const char* kSweepCsvHeader =
    "n,epsilon,rho,strategy,family,seeds,decided_frac,round_p50,round_p25,round_p75,growth_p99,slope_so_far";

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);
void write_sweep_jsonl(std::ostream& out, const SweepSpec& spec, const SweepResult& result);
ojson to_json(const SweepSpec& spec);

}  // namespace cyclemr
