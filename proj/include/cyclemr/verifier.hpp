#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclemr/engine.hpp"
#include "cyclemr/trace.hpp"
#include "cyclemr/tree.hpp"

namespace cyclemr {

// Trim margin, contained-path length cap and overhang bound for round r.
enum class MarginProfile {
  literal,   // rho^r/32, rho^r/8, rho^r/32 floored; usually degenerate at desk scale
  rescaled,  // max(1, rho^r/32), max(2, rho^r/8), same as margin
  nested,    // margin_r = 2^r - 1, cap 4*margin_r, overhang margin_r: margins grow faster than overhangs
};

MarginProfile parse_profile(const std::string& name);
const char* profile_name(MarginProfile p);

struct Thresholds {
  unsigned round = 0;
  std::uint32_t margin = 0;
  std::uint32_t cap = 0;
  std::uint32_t overhang = 0;
  double raw_margin = 0;  // the unrounded formula values
  double raw_cap = 0;
  bool degenerate = false;  // a formula value fell below 1
};

Thresholds thresholds(MarginProfile profile, std::uint32_t rho, unsigned round);

// Window conditions of the local invariance check and of the veiled definition:
// members of `set` inside `window` are at most `cap` long, the others overlap
// it by at most `overhang`. An absent window satisfies everything.
struct WindowViolation {
  bool contained = false;  // true: a contained path too long; false: an overhang too long
  Path path;
  std::uint32_t length = 0;  // path length or overlap length
};
std::optional<WindowViolation> window_violation(std::span<const Path> set, const std::optional<Path>& window,
                                                const Thresholds& t);

// Full-trace run with no early stop, the building block of every checker.
RunResult run_for_check(const Instance& instance, const StrategyFactory& factory, const Config& config,
                        std::uint32_t rounds, const Placement& placement = {});

// ---------------------------------------------------------------- invariance

struct InvarianceRound {
  Round round = 0;
  bool precondition = false;       // window conditions on I1
  std::optional<bool> claim_i;     // asserted only while preconditions held
  std::optional<bool> claim_ii;
};

struct InvarianceReport {
  std::string i1;
  std::string i2;
  std::vector<PointId> h;
  std::vector<InvarianceRound> rounds;
  std::optional<Round> precondition_failed_at;
  std::optional<Round> first_failure;
  std::string witness;  // pathkit debug format
  bool passed() const noexcept { return !first_failure.has_value(); }
};

// Throws NoCommonPath when H is not a path of both instances.
InvarianceReport check_invariance(const Instance& i1, const Instance& i2, const std::vector<PointId>& h,
                                  const StrategyFactory& factory, const Config& config, MarginProfile profile,
                                  std::uint32_t rounds = 0);

struct InvarianceWitness {
  std::string i1;
  std::string i2;
  std::vector<PointId> h;
  Round round = 0;
  std::string claim;  // "i" or "ii"
};

struct ExhaustiveInvarianceReport {
  std::string strategy;
  PointId n = 0;
  std::uint32_t rho = 0;
  MarginProfile profile = MarginProfile::rescaled;
  std::uint32_t min_h = 0;
  std::uint32_t rounds = 0;
  std::uint64_t instances = 0;
  std::uint64_t paths_h = 0;        // candidate H sequences
  std::uint64_t instance_h = 0;     // (I, H) incidences
  std::vector<std::uint64_t> asserted_pairs;      // per round: ordered (I1, I2) pairs with preconditions held
  std::vector<std::uint64_t> precondition_fails;  // per round: (I1, H) where preconditions first failed
  std::vector<std::uint64_t> claim_i_failures;    // per round
  std::vector<std::uint64_t> claim_ii_failures;   // per round
  std::optional<InvarianceWitness> witness;       // smallest failing (H, round)
  std::uint64_t total_claim_i() const;
  std::uint64_t total_claim_ii() const;
  bool passed() const { return total_claim_i() == 0 && total_claim_ii() == 0; }
};

// Every one-cycle instance of size n, every H with min_h <= |H| <= n, every
// pair of instances containing H. Throws CapExceeded when n! > node_cap.
ExhaustiveInvarianceReport check_invariance_exhaustive(const std::string& strategy_name,
                                                       const StrategyFactory& factory, const Config& config,
                                                       MarginProfile profile, std::uint32_t min_h = 4,
                                                       std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------- purview

struct PurviewViolation {
  Round round = 0;
  MachineIndex machine = 0;
  std::string path;
  std::string i1;
  std::string i2;
};

struct PurviewReport {
  std::string strategy;
  std::uint64_t instances = 0;
  std::uint64_t observations = 0;  // routed (instance, round, machine, path) records
  std::uint64_t repeated = 0;      // records whose path+history was already seen elsewhere
  std::uint64_t violation_count = 0;
  std::vector<PurviewViolation> violations;  // first few
  bool passed() const noexcept { return violation_count == 0; }
};

// Runs both instances and compares the routing of every path (same IDs, same
// history, same round and machine) that occurs in both.
PurviewReport purview_audit(const StrategyFactory& factory, const Instance& i1, const Instance& i2,
                            const std::vector<PointId>& h, const Config& config, std::uint32_t rounds = 0);

// The same comparison across all one-cycle instances of size n at once.
PurviewReport purview_audit_exhaustive(const std::string& strategy_name, const StrategyFactory& factory,
                                       const Config& config, std::uint32_t rounds = 0,
                                       std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------- veiled

enum class Verdict { veiled, not_veiled, no_violation_found, cap_exceeded };
const char* verdict_name(Verdict v);

struct VeiledMode {
  bool exhaustive = true;
  std::uint32_t samples = 0;  // sampled mode: instance pairs
  std::uint64_t seed = 1;
};

struct VeiledReport {
  std::string partition;
  unsigned level = 0;
  std::string strategy;
  Thresholds thresholds;
  std::uint64_t instances = 0;
  std::uint64_t condition1_count = 0;
  std::vector<std::string> condition1;  // first few witnesses
  std::uint64_t condition2_count = 0;   // unordered instance pairs that disagree
  std::vector<std::string> condition2;
  Verdict verdict = Verdict::veiled;
};

VeiledReport check_veiled(const PartitionNode& s, const std::string& strategy_name, const StrategyFactory& factory,
                          const Config& config, MarginProfile profile, const VeiledMode& mode = {},
                          std::uint64_t node_cap = kDefaultNodeCap);

// All proper ancestors at level >= 1 checked exhaustively; the root counts as veiled.
bool check_ascendant_veiled(const PartitionNode& s, const StrategyFactory& factory, const Config& config,
                            MarginProfile profile, std::uint64_t node_cap = kDefaultNodeCap);

struct VeiledCensus {
  unsigned level = 0;
  std::uint64_t partitions = 0;
  std::uint64_t veiled = 0;
  double fraction() const { return partitions ? static_cast<double>(veiled) / static_cast<double>(partitions) : 0.0; }
};

// Exhaustive veiled check over every partition of one level.
VeiledCensus veiled_census(unsigned level, const StrategyFactory& factory, const Config& config,
                           MarginProfile profile, std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------- round 1, growth

struct Round1Stats {
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
  std::uint32_t kappa = 0;
  double floor = 0;
  double frequency() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
  bool passed() const { return frequency() >= floor; }
};

// Fraction of uniform one-cycle instances whose round-1 paths are all at most kappa long.
Round1Stats check_round1(const StrategyFactory& factory, const Config& config, std::uint32_t trials,
                         std::uint32_t kappa, double floor = 0.99, const Placement& placement = {});

struct GrowthRow {
  Round round = 0;
  std::uint32_t max_len = 0;
  double ratio = 0;  // against the previous round; round 1 against single points
  std::uint64_t bound = 0;  // 2 rho^r, saturating
  bool flagged = false;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::uint32_t flags = 0;
};

GrowthReport check_growth(const std::vector<std::uint32_t>& max_lengths, std::uint32_t rho);
GrowthReport check_growth(const RunResult& result, std::uint32_t rho);

// ---------------------------------------------------------------- center paths

// Members of `machine_paths` inside the margin-trimmed segment `s` of `instance`.
PathSet center_paths(std::span<const Path> machine_paths, const Segment& s, const Instance& instance,
                     std::uint32_t margin);

struct MarkReport {
  std::vector<std::size_t> marked;  // indices into the partition's segments
  std::uint32_t cap = 0;
  std::uint64_t instances = 0;
  bool exhaustive = true;
  bool within_cap() const noexcept { return marked.size() <= cap; }
};

// Segments of the level-(r-1) partition `s` for which machine m holds a
// center path before reduce in round r = level + 1, over U(s).
MarkReport mark_segments(const PartitionNode& s, const StrategyFactory& factory, const Config& config,
                         MachineIndex m, MarginProfile profile, const VeiledMode& mode = {},
                         std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------- reports

ojson to_json(const Thresholds& t);
ojson to_json(const InvarianceReport& r);
ojson to_json(const ExhaustiveInvarianceReport& r);
ojson to_json(const PurviewReport& r);
ojson to_json(const VeiledReport& r);
ojson to_json(const Round1Stats& r);
ojson to_json(const GrowthReport& r);
ojson to_json(const MarkReport& r);

}  // namespace cyclemr
