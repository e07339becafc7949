#include <algorithm>
#include <unordered_map>

#include "cyclemr/rng.hpp"
#include "cyclemr/verifier.hpp"
#include "verifier/enumerate.hpp"

namespace cyclemr {

namespace {

struct Observation {
  std::uint64_t key;      // round, machine, IDs, history digest
  std::uint64_t targets;  // hash of the routed machine set
  Round round;
  MachineIndex machine;
  std::vector<PointId> ids;
};

std::uint64_t key_of(Round round, MachineIndex machine, const Path& p) {
  std::uint64_t h = hash_values(0x70757276ULL, round, machine, p.digest(), p.size());
  const auto [head, tail] = p.point_runs();
  for (PointId id : head) h = hash_combine(h, id);
  for (PointId id : tail) h = hash_combine(h, id);
  return h;
}

std::uint64_t targets_of(std::span<const MachineIndex> t) {
  std::uint64_t h = hash_values(0x74677473ULL, t.size());
  for (MachineIndex m : t) h = hash_combine(h, m);
  return h;
}

std::vector<Observation> observe(const Instance& instance, const StrategyFactory& factory, const Config& config,
                                 std::uint32_t rounds, bool keep_ids) {
  std::vector<Observation> out;
  const auto strategy = factory(instance);
  RunOptions options;
  options.stop_on_decision = false;
  options.rounds = rounds;
  options.observer = [&](Round r, MachineIndex m, const Path& p, std::span<const MachineIndex> t) {
    Observation o{key_of(r, m, p), targets_of(t), r, m, {}};
    if (keep_ids) o.ids = p.points();
    out.push_back(std::move(o));
  };
  run(instance, *strategy, config, options);
  return out;
}

std::string id_list(const std::vector<PointId>& ids) {
  std::string s = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s + "]";
}

std::uint32_t audit_rounds(const Config& config, std::uint32_t rounds) {
  return rounds != 0 ? rounds : std::max(1u, ilog(config.n, config.rho));
}

constexpr std::size_t kKeptViolations = 8;

}  // namespace

PurviewReport purview_audit(const StrategyFactory& factory, const Instance& i1, const Instance& i2,
                            const std::vector<PointId>& h, const Config& config, std::uint32_t rounds) {
  if (!h.empty()) {
    Path::from_ids(i1, h);
    Path::from_ids(i2, h);
  }
  rounds = audit_rounds(config, rounds);
  PurviewReport rep;
  rep.strategy = factory(i1)->name();
  rep.instances = 2;
  const auto a = observe(i1, factory, config, rounds, true);
  const auto b = observe(i2, factory, config, rounds, true);
  rep.observations = a.size() + b.size();
  std::unordered_map<std::uint64_t, const Observation*> seen;
  for (const auto& o : a) seen.emplace(o.key, &o);
  for (const auto& o : b) {
    const auto it = seen.find(o.key);
    if (it == seen.end()) continue;
    ++rep.repeated;
    if (it->second->targets != o.targets) {
      ++rep.violation_count;
      if (rep.violations.size() < kKeptViolations) {
        rep.violations.push_back(PurviewViolation{o.round, o.machine, id_list(o.ids), i1.serialize(), i2.serialize()});
      }
    }
  }
  return rep;
}

PurviewReport purview_audit_exhaustive(const std::string& strategy_name, const StrategyFactory& factory,
                                       const Config& config, std::uint32_t rounds, std::uint64_t node_cap) {
  const std::uint64_t total = factorial(config.n);
  if (total > node_cap) {
    throw CycleError(Errc::cap_exceeded, std::to_string(total) + " instances exceed the cap of " +
                                             std::to_string(node_cap));
  }
  rounds = audit_rounds(config, rounds);
  const auto instances = detail::all_one_cycle_instances(config.n);
  std::vector<std::vector<Observation>> obs(instances.size());
  const auto count = static_cast<std::int64_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < count; ++i) {
    obs[static_cast<std::size_t>(i)] = observe(instances[static_cast<std::size_t>(i)], factory, config, rounds, false);
  }
  PurviewReport rep;
  rep.strategy = strategy_name;
  rep.instances = instances.size();
  struct First {
    std::uint64_t targets;
    std::size_t instance;
  };
  std::unordered_map<std::uint64_t, First> seen;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    rep.observations += obs[i].size();
    for (const auto& o : obs[i]) {
      const auto [it, fresh] = seen.emplace(o.key, First{o.targets, i});
      if (fresh) continue;
      ++rep.repeated;
      if (it->second.targets == o.targets) continue;
      ++rep.violation_count;
      if (rep.violations.size() < kKeptViolations) {
        // Recover the readable path from the second instance's run.
        const auto detail = observe(instances[i], factory, config, rounds, true);
        const auto match = std::find_if(detail.begin(), detail.end(),
                                        [&](const Observation& d) { return d.key == o.key; });
        rep.violations.push_back(PurviewViolation{o.round, o.machine, match != detail.end() ? id_list(match->ids) : "",
                                                  instances[it->second.instance].serialize(),
                                                  instances[i].serialize()});
      }
    }
  }
  return rep;
}

}  // namespace cyclemr
