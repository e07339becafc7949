#include <algorithm>
#include <set>

#include "cyclemr/rng.hpp"
#include "cyclemr/verifier.hpp"

namespace cyclemr {

Round1Stats check_round1(const StrategyFactory& factory, const Config& config, std::uint32_t trials,
                         std::uint32_t kappa, double floor, const Placement& placement) {
  Round1Stats st;
  st.trials = trials;
  st.kappa = kappa;
  st.floor = floor;
  std::vector<char> ok(trials, 0);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t t = 0; t < count; ++t) {
    const Instance inst = random_one_cycle(config.n, hash_values(config.seed, 0x72313174ULL, t));
    const auto strategy = factory(inst);
    RunOptions options;
    options.placement = placement;
    options.rounds = 1;
    options.stop_on_decision = false;
    const RunResult res = run(inst, *strategy, config, options);
    ok[static_cast<std::size_t>(t)] =
        !res.violation && !res.rounds.empty() && res.rounds.front().max_len <= kappa ? 1 : 0;
  }
  for (char c : ok) st.successes += c ? 1 : 0;
  return st;
}

GrowthReport check_growth(const std::vector<std::uint32_t>& max_lengths, std::uint32_t rho) {
  GrowthReport rep;
  std::uint32_t prev = 1;
  for (std::size_t i = 0; i < max_lengths.size(); ++i) {
    GrowthRow row;
    row.round = static_cast<Round>(i + 1);
    row.max_len = max_lengths[i];
    row.ratio = prev ? static_cast<double>(row.max_len) / prev : 0.0;
    row.bound = saturating_mul(2, ipow(rho, row.round));
    row.flagged = row.max_len > row.bound;
    rep.flags += row.flagged ? 1 : 0;
    rep.rows.push_back(row);
    if (row.max_len != 0) prev = row.max_len;
  }
  return rep;
}

GrowthReport check_growth(const RunResult& result, std::uint32_t rho) {
  std::vector<std::uint32_t> lens;
  for (const auto& t : result.rounds) {
    if (!t.aborted) lens.push_back(t.max_len);
  }
  return check_growth(lens, rho);
}

PathSet center_paths(std::span<const Path> machine_paths, const Segment& s, const Instance& instance,
                     std::uint32_t margin) {
  const Path sp = Path::from_ids(instance, s);
  const auto window = trim(sp, margin);
  if (!window) return {};
  return restrict_to(machine_paths, *window);
}

MarkReport mark_segments(const PartitionNode& s, const StrategyFactory& factory, const Config& config,
                         MachineIndex m, MarginProfile profile, const VeiledMode& mode, std::uint64_t node_cap) {
  if (m >= config.machines) throw CycleError(Errc::index_out_of_range, "machine " + std::to_string(m));
  MarkReport rep;
  rep.cap = config.memory_cap;
  rep.exhaustive = mode.exhaustive;
  std::vector<Instance> instances;
  if (mode.exhaustive) {
    if (s.subspace_size() > node_cap) {
      throw CycleError(Errc::cap_exceeded, "subspace of " + std::to_string(s.subspace_size()) + " instances");
    }
    s.for_each_instance([&](const Instance& i) { instances.push_back(i); });
  } else {
    for (std::uint32_t k = 0; k < mode.samples; ++k) instances.push_back(s.sample(hash_values(mode.seed, 0x6d61726bULL, k)));
  }
  rep.instances = instances.size();
  const Round r = s.level() + 1;
  const std::uint32_t margin = thresholds(profile, config.rho, s.level()).margin;
  std::set<std::size_t> marked;
  for (const Instance& inst : instances) {
    const RunResult res = run_for_check(inst, factory, config, r);
    if (res.rounds.size() < r) continue;
    const PathSet& inbox = res.rounds[r - 1].machines[m].inbox;
    for (std::size_t j = 0; j < s.segments().size(); ++j) {
      if (!center_paths(inbox, s.segments()[j], inst, margin).empty()) marked.insert(j);
    }
  }
  rep.marked.assign(marked.begin(), marked.end());
  return rep;
}

}  // namespace cyclemr
