#include <algorithm>
#include <numeric>
#include <sstream>

#include "cyclemr/rng.hpp"
#include "cyclemr/verifier.hpp"

namespace cyclemr {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::veiled: return "veiled";
    case Verdict::not_veiled: return "not-veiled";
    case Verdict::no_violation_found: return "no-violation-found";
    case Verdict::cap_exceeded: return "cap-exceeded";
  }
  return "?";
}

namespace {

constexpr std::size_t kKeptWitnesses = 8;

struct SegItem {
  MachineIndex machine;
  std::uint32_t segment;
  std::uint32_t offset;  // within the segment
  std::uint32_t length;
  std::uint64_t digest;
  friend auto operator<=>(const SegItem&, const SegItem&) = default;
};

struct InstanceView {
  std::vector<SegItem> signature;
  std::optional<std::string> condition1;
};

InstanceView inspect(const Instance& inst, const PartitionNode& s, const StrategyFactory& factory,
                     const Config& config, const Thresholds& th) {
  InstanceView out;
  const RunResult res = run_for_check(inst, factory, config, s.level());
  if (res.rounds.empty() || res.rounds.back().aborted) {
    out.condition1 = "run aborted: memory exceeded";
    return out;
  }
  const RoundTrace& t = res.rounds.back();
  const auto& segs = s.segments();
  for (std::uint32_t j = 0; j < segs.size(); ++j) {
    const Path sp = Path::from_ids(inst, segs[j]);
    const auto window = trim(sp, th.margin);
    if (!window) continue;
    for (std::size_t m = 0; m < t.machines.size(); ++m) {
      const PathSet& box = t.machines[m].outbox;
      if (!out.condition1) {
        if (auto v = window_violation(box, window, th)) {
          std::ostringstream os;
          os << inst.serialize() << " machine " << m << " segment " << j << ": " << v->path.debug_string()
             << (v->contained ? " length " : " overlap ") << v->length;
          out.condition1 = os.str();
        }
      }
      for (const Path& p : restrict_to(box, *window)) {
        const auto off = p.offset() >= sp.offset() ? p.offset() - sp.offset() : p.offset() + sp.cycle_size() - sp.offset();
        out.signature.push_back(SegItem{static_cast<MachineIndex>(m), j, off, p.size(), p.digest()});
      }
    }
  }
  std::sort(out.signature.begin(), out.signature.end());
  return out;
}

std::vector<Instance> subspace_instances(const PartitionNode& s, const VeiledMode& mode) {
  std::vector<Instance> out;
  if (mode.exhaustive) {
    s.for_each_instance([&](const Instance& i) { out.push_back(i); });
  } else {
    for (std::uint32_t k = 0; k < 2 * mode.samples; ++k) out.push_back(s.sample(hash_values(mode.seed, 0x7665696cULL, k)));
  }
  return out;
}

}  // namespace

VeiledReport check_veiled(const PartitionNode& s, const std::string& strategy_name, const StrategyFactory& factory,
                          const Config& config, MarginProfile profile, const VeiledMode& mode, std::uint64_t node_cap) {
  VeiledReport rep;
  rep.partition = s.to_string();
  rep.level = s.level();
  rep.strategy = strategy_name;
  rep.thresholds = thresholds(profile, config.rho, s.level());
  if (s.is_root()) {
    rep.verdict = Verdict::veiled;  // by convention
    return rep;
  }
  if (mode.exhaustive) {
    if (s.subspace_size() > node_cap) {
      throw CycleError(Errc::cap_exceeded, "subspace of " + std::to_string(s.subspace_size()) + " instances");
    }
  } else if (2 * std::uint64_t{mode.samples} > node_cap) {
    rep.verdict = Verdict::cap_exceeded;
    return rep;
  }
  const auto instances = subspace_instances(s, mode);
  rep.instances = instances.size();
  std::vector<InstanceView> views(instances.size());
  const auto count = static_cast<std::int64_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    views[static_cast<std::size_t>(i)] =
        inspect(instances[static_cast<std::size_t>(i)], s, factory, config, rep.thresholds);
  }
  for (const auto& v : views) {
    if (!v.condition1) continue;
    ++rep.condition1_count;
    if (rep.condition1.size() < kKeptWitnesses) rep.condition1.push_back(*v.condition1);
  }
  const auto note_pair = [&](std::size_t a, std::size_t b) {
    if (rep.condition2.size() < kKeptWitnesses) {
      rep.condition2.push_back(instances[a].serialize() + " vs " + instances[b].serialize());
    }
  };
  if (mode.exhaustive) {
    std::vector<std::size_t> order(views.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return views[a].signature < views[b].signature; });
    std::uint64_t same = 0;
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo + 1;
      while (hi < order.size() && views[order[hi]].signature == views[order[lo]].signature) ++hi;
      same += (hi - lo) * (hi - lo - 1) / 2;
      lo = hi;
    }
    const std::uint64_t n = views.size();
    rep.condition2_count = n * (n - 1) / 2 - same;
    for (std::size_t k = 1; k < views.size() && rep.condition2.size() < kKeptWitnesses; ++k) {
      if (views[k].signature != views[0].signature) note_pair(0, k);
    }
  } else {
    for (std::size_t k = 0; k + 1 < views.size(); k += 2) {
      if (views[k].signature != views[k + 1].signature) {
        ++rep.condition2_count;
        note_pair(k, k + 1);
      }
    }
  }
  const bool clean = rep.condition1_count == 0 && rep.condition2_count == 0;
  if (mode.exhaustive) {
    rep.verdict = clean ? Verdict::veiled : Verdict::not_veiled;
  } else {
    rep.verdict = clean ? Verdict::no_violation_found : Verdict::not_veiled;
  }
  return rep;
}

bool check_ascendant_veiled(const PartitionNode& s, const StrategyFactory& factory, const Config& config,
                            MarginProfile profile, std::uint64_t node_cap) {
  for (const PartitionNode& a : s.ancestors()) {
    if (a.is_root()) continue;
    if (check_veiled(a, "", factory, config, profile, VeiledMode{}, node_cap).verdict != Verdict::veiled) {
      return false;
    }
  }
  return true;
}

VeiledCensus veiled_census(unsigned level, const StrategyFactory& factory, const Config& config,
                           MarginProfile profile, std::uint64_t node_cap) {
  const auto counts = level_counts(config.n, config.rho);
  if (level >= counts.size()) throw CycleError(Errc::index_out_of_range, "level beyond the leaves");
  // every partition of the level times its subspace is the whole instance space
  if (counts[level] > node_cap || factorial(config.n) > node_cap) {
    throw CycleError(Errc::cap_exceeded, "census over " + std::to_string(counts[level]) + " partitions");
  }
  std::vector<PartitionNode> frontier{build_tree(config.n, config.rho)};
  for (unsigned l = 0; l < level; ++l) {
    std::vector<PartitionNode> next;
    for (const auto& node : frontier) {
      auto kids = node.children();
      next.insert(next.end(), std::make_move_iterator(kids.begin()), std::make_move_iterator(kids.end()));
    }
    frontier = std::move(next);
  }
  VeiledCensus c;
  c.level = level;
  c.partitions = frontier.size();
  for (const auto& node : frontier) {
    if (check_veiled(node, "", factory, config, profile, VeiledMode{}, node_cap).verdict == Verdict::veiled) {
      ++c.veiled;
    }
  }
  return c;
}

}  // namespace cyclemr
