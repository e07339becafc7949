#include "cyclemr/reference.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cyclemr/history.hpp"
#include "cyclemr/rng.hpp"

namespace cyclemr::reference {

namespace {

bool shares_point(const RefPath& a, const RefPath& b) {
  for (PointId x : a.ids) {
    if (std::find(b.ids.begin(), b.ids.end(), x) != b.ids.end()) return true;
  }
  return false;
}

bool touches(const Instance& inst, const RefPath& a, const RefPath& b) {
  if (inst.cycle_of(inst.location_of(a.ids.front())) != inst.cycle_of(inst.location_of(b.ids.front()))) {
    return false;
  }
  return shares_point(a, b) || inst.successor(a.ids.back()) == b.ids.front() ||
         inst.successor(b.ids.back()) == a.ids.front();
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::vector<RefPath> reduce(const Instance& inst, std::vector<RefPath> paths, Round round, MachineIndex machine) {
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  const std::size_t k = paths.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (touches(inst, paths[i], paths[j])) parent[find(parent, i)] = find(parent, j);
    }
  }
  std::vector<std::vector<std::size_t>> comps(k);
  for (std::size_t i = 0; i < k; ++i) comps[find(parent, i)].push_back(i);

  std::vector<RefPath> out;
  for (const auto& comp : comps) {
    if (comp.empty()) continue;
    if (comp.size() == 1) {
      out.push_back(paths[comp[0]]);
      continue;
    }
    std::set<PointId> all;
    for (std::size_t i : comp) all.insert(paths[i].ids.begin(), paths[i].ids.end());
    // Start of the union: the point without a predecessor in it, or the
    // cycle's first location when the union is the whole cycle.
    const std::uint32_t cyc = inst.cycle_of(inst.location_of(*all.begin()));
    const CycleSpan span = inst.cycle(cyc);
    PointId start = inst.at(span.begin);
    if (all.size() < span.size) {
      for (PointId x : all) {
        if (!all.count(inst.successor(x))) {
          start = inst.successor(x);
          break;
        }
      }
      while (!all.count(start)) start = inst.successor(start);
    }
    RefPath merged;
    for (PointId x = start; merged.ids.size() < all.size(); x = inst.successor(x)) merged.ids.push_back(x);
    auto position = [&](PointId id) {
      return static_cast<std::size_t>(std::find(merged.ids.begin(), merged.ids.end(), id) - merged.ids.begin());
    };
    std::vector<const RefPath*> members;
    for (std::size_t i : comp) members.push_back(&paths[i]);
    std::sort(members.begin(), members.end(), [&](const RefPath* a, const RefPath* b) {
      const auto pa = position(a->ids.front());
      const auto pb = position(b->ids.front());
      if (pa != pb) return pa < pb;
      if (a->ids.size() != b->ids.size()) return a->ids.size() < b->ids.size();
      return a->digest < b->digest;
    });
    std::vector<std::uint64_t> digests;
    for (const RefPath* m : members) digests.push_back(m->digest);
    merged.digest = merge_digest(round, machine, digests);
    out.push_back(std::move(merged));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RefPath to_ref(const Path& p) { return RefPath{p.points(), p.digest()}; }

RefResult run(const Instance& inst, const Strategy& strategy, const Config& config, const Placement& placement,
              std::uint32_t rounds, bool stop_on_decision) {
  RefResult result;
  const std::uint32_t M = config.machines;
  std::vector<std::vector<RefPath>> inbox(M);
  const PointId n = inst.n();
  auto leaf = [](PointId id) { return RefPath{{id}, leaf_digest(id)}; };
  if (placement.mode == PlacementMode::round_robin) {
    for (PointId id = 0; id <= n; ++id) inbox[id % M].push_back(leaf(id));
  } else if (placement.mode == PlacementMode::seeded_random) {
    std::vector<PointId> ids(n + 1);
    std::iota(ids.begin(), ids.end(), PointId{0});
    Rng rng(hash_values(placement.seed, 0x706c6163ULL));
    rng.shuffle(std::span<PointId>(ids));
    for (std::size_t i = 0; i < ids.size(); ++i) inbox[i % M].push_back(leaf(ids[i]));
  } else {
    for (PointId id = 0; id <= n; ++id) {
      for (std::uint32_t j = 0; j < placement.replicas; ++j) inbox[(id + j) % M].push_back(leaf(id));
    }
  }
  const std::uint32_t threshold = min_deciding_length(n);

  std::vector<std::vector<RefPath>> outbox(M);
  for (Round r = 1; r <= rounds; ++r) {
    if (r > 1) {
      for (auto& b : inbox) b.clear();
      for (MachineIndex m = 0; m < M; ++m) {
        for (const RefPath& p : outbox[m]) {
          std::vector<MachineIndex> t;
          strategy.route(StrategyView(p.ids, {}, p.digest, nullptr, r, m, config), t);
          std::sort(t.begin(), t.end());
          t.erase(std::unique(t.begin(), t.end()), t.end());
          for (MachineIndex target : t) inbox.at(target).push_back(p);
        }
      }
    }
    RefRound rec;
    rec.round = r;
    rec.machines.resize(M);
    for (MachineIndex m = 0; m < M; ++m) {
      auto& box = inbox[m];
      std::sort(box.begin(), box.end());
      box.erase(std::unique(box.begin(), box.end()), box.end());
      rec.machines[m].inbox = box;
      if (box.size() > config.memory_cap) rec.aborted = true;
    }
    if (rec.aborted) {
      result.rounds.push_back(std::move(rec));
      result.decision = Decision::memory_exceeded;
      return result;
    }
    for (MachineIndex m = 0; m < M; ++m) {
      outbox[m] = reduce(inst, inbox[m], r, m);
      rec.machines[m].outbox = outbox[m];
      for (const RefPath& p : outbox[m]) rec.max_len = std::max<std::uint32_t>(rec.max_len, p.ids.size());
    }
    rec.decided = rec.max_len >= threshold;
    result.rounds.push_back(std::move(rec));
    if (result.rounds.back().decided && result.decision_round == 0) {
      result.decision = Decision::single_cycle_evidence;
      result.decision_round = r;
      if (stop_on_decision) return result;
    }
  }
  return result;
}

}  // namespace cyclemr::reference
