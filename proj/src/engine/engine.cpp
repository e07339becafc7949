#include "cyclemr/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cyclemr/rng.hpp"

namespace cyclemr {

PlacementMode parse_placement(const std::string& name) {
  if (name == "round-robin") return PlacementMode::round_robin;
  if (name == "seeded-random") return PlacementMode::seeded_random;
  if (name == "replicated") return PlacementMode::replicated;
  throw CycleError(Errc::parse_error, "unknown placement '" + name + "'");
}

const char* placement_name(PlacementMode mode) {
  switch (mode) {
    case PlacementMode::round_robin: return "round-robin";
    case PlacementMode::seeded_random: return "seeded-random";
    case PlacementMode::replicated: return "replicated";
  }
  return "?";
}

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::single_cycle_evidence: return "single-cycle-evidence";
    case Decision::undecided: return "undecided";
    case Decision::memory_exceeded: return "memory-exceeded";
  }
  return "?";
}

std::vector<MachineState> init_placement(const Instance& instance, const Config& config, const Placement& placement,
                                         bool keep_history_tree) {
  const std::uint32_t machines = config.machines;
  if (machines == 0) throw CycleError(Errc::bad_size, "no machines");
  std::vector<MachineState> states(machines);
  for (MachineIndex m = 0; m < machines; ++m) states[m].index = m;

  const std::uint32_t count = instance.point_count();
  std::vector<PointId> ids(count);
  std::iota(ids.begin(), ids.end(), PointId{0});

  switch (placement.mode) {
    case PlacementMode::round_robin:
      for (PointId id : ids) states[id % machines].inbox.push_back(Path::point(instance, id, keep_history_tree));
      break;
    case PlacementMode::seeded_random: {
      // IDs only; the same seed places the same ID on the same machine in every instance.
      Rng rng(hash_values(placement.seed, 0x706c6163ULL));
      rng.shuffle(std::span<PointId>(ids));
      for (std::uint32_t i = 0; i < count; ++i) {
        states[i % machines].inbox.push_back(Path::point(instance, ids[i], keep_history_tree));
      }
      break;
    }
    case PlacementMode::replicated: {
      if (placement.replicas == 0 || placement.replicas > machines) {
        throw CycleError(Errc::bad_size, "replica count must lie in [1, M]");
      }
      for (PointId id : ids) {
        const Path p = Path::point(instance, id, keep_history_tree);
        for (std::uint32_t j = 0; j < placement.replicas; ++j) states[(id + j) % machines].inbox.push_back(p);
      }
      break;
    }
  }
  for (const auto& s : states) {
    if (s.inbox.size() > config.memory_cap) {
      throw CycleError(Errc::capacity_infeasible, "machine " + std::to_string(s.index) + " would hold " +
                                                      std::to_string(s.inbox.size()) + " points, cap " +
                                                      std::to_string(config.memory_cap));
    }
  }
  for (auto& s : states) std::sort(s.inbox.begin(), s.inbox.end(), ArcLess{});
  return states;
}

namespace {

void dedupe(PathSet& set) {
  std::sort(set.begin(), set.end(), ArcLess{});
  set.erase(std::unique(set.begin(), set.end(), [](const Path& a, const Path& b) { return a.same_path(b); }),
            set.end());
}

// Reduce every inbox; returns the smallest machine over the cap, if any.
std::optional<MemoryViolation> reduce_all(std::vector<MachineState>& states, Round round, const Config& config) {
  const auto machines = static_cast<std::int64_t>(states.size());
  std::vector<std::exception_ptr> errors(states.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < machines; ++i) {
    auto& s = states[static_cast<std::size_t>(i)];
    try {
      dedupe(s.inbox);
      if (s.inbox.size() <= config.memory_cap) {
        s.outbox = reduce_set(s.inbox, MergeContext{round, s.index});
      } else {
        s.outbox.clear();
      }
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& s : states) {
    if (s.inbox.size() > config.memory_cap) {
      return MemoryViolation{round, s.index, s.inbox.size(), config.memory_cap};
    }
  }
  return std::nullopt;
}

}  // namespace

RoundOutcome run_round(std::vector<MachineState>& states, const Strategy& strategy, const Instance& instance,
                       Round round, const Config& config, const RouteObserver* observer) {
  (void)instance;
  if (round <= 1) return RoundOutcome{reduce_all(states, 1, config)};

  // Map: targets for every (source machine, path), computed in parallel.
  // Per source machine, path k's targets are flat[offsets[k] .. offsets[k+1]).
  struct Routed {
    std::vector<MachineIndex> flat;
    std::vector<std::uint32_t> offsets;
  };
  const auto machines = static_cast<std::int64_t>(states.size());
  std::vector<Routed> routed(states.size());
  std::vector<std::exception_ptr> errors(states.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < machines; ++i) {
    const auto& s = states[static_cast<std::size_t>(i)];
    auto& out = routed[static_cast<std::size_t>(i)];
    out.offsets.reserve(s.outbox.size() + 1);
    out.offsets.push_back(0);
    std::vector<MachineIndex> t;
    try {
      for (const Path& p : s.outbox) {
        const auto [head, tail] = p.point_runs();
        const StrategyView view(head, tail, p.digest(), p.history().get(), round, s.index, config);
        t.clear();
        strategy.route(view, t);
        if (t.empty()) throw CycleError(Errc::invalid_route, strategy.name() + " dropped a path");
        for (MachineIndex m : t) {
          if (m >= config.machines) {
            throw CycleError(Errc::invalid_route, strategy.name() + " routed to machine " + std::to_string(m));
          }
        }
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        out.flat.insert(out.flat.end(), t.begin(), t.end());
        out.offsets.push_back(static_cast<std::uint32_t>(out.flat.size()));
      }
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Shuffle, in source order so inboxes come out identical for any thread count.
  for (auto& s : states) s.inbox.clear();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    const auto& r = routed[i];
    for (std::size_t k = 0; k < s.outbox.size(); ++k) {
      const std::span<const MachineIndex> t(r.flat.data() + r.offsets[k], r.offsets[k + 1] - r.offsets[k]);
      if (observer && *observer) (*observer)(round, s.index, s.outbox[k], t);
      for (MachineIndex m : t) states[m].inbox.push_back(s.outbox[k]);
    }
  }
  return RoundOutcome{reduce_all(states, round, config)};
}

RunResult run(const Instance& instance, const Strategy& strategy, const Config& config, const RunOptions& options) {
  RunResult result;
  const std::uint32_t budget = options.rounds != 0 ? options.rounds : config.rounds;
  if (budget == 0) return result;
  auto states = init_placement(instance, config, options.placement, options.keep_history_tree);
  const std::uint32_t threshold = min_deciding_length(instance.n());
  const RouteObserver* observer = options.observer ? &options.observer : nullptr;

  for (Round r = 1; r <= budget; ++r) {
    const RoundOutcome outcome = run_round(states, strategy, instance, r, config, observer);
    RoundTrace trace;
    trace.round = r;
    trace.machines.resize(states.size());
    std::vector<bool> covered(instance.cycle_count(), false);
    for (std::size_t m = 0; m < states.size(); ++m) {
      auto& rec = trace.machines[m];
      const auto& s = states[m];
      rec.inbox_count = static_cast<std::uint32_t>(s.inbox.size());
      rec.path_count = static_cast<std::uint32_t>(s.outbox.size());
      for (const Path& p : s.outbox) {
        rec.max_len = std::max(rec.max_len, p.size());
        if (p.full_cycle()) covered[p.cycle()] = true;
      }
      trace.max_len = std::max(trace.max_len, rec.max_len);
      if (options.trace == TraceLevel::full) {
        rec.inbox = s.inbox;
        rec.outbox = s.outbox;
      }
    }
    if (outcome.violation) {
      trace.aborted = true;
      result.rounds.push_back(std::move(trace));
      result.violation = outcome.violation;
      result.decision = Decision::memory_exceeded;
      return result;
    }
    trace.decided = trace.max_len >= threshold;
    result.rounds.push_back(std::move(trace));
    if (result.rounds.back().decided && result.decision_round == 0) {
      result.decision = Decision::single_cycle_evidence;
      result.decision_round = r;
      if (options.stop_on_decision) return result;
    }
    if (result.decision_round == 0 && options.stop_when_saturated &&
        std::all_of(covered.begin(), covered.end(), [](bool c) { return c; })) {
      // Nothing left to learn and nothing long enough to decide.
      result.saturated = true;
      return result;
    }
  }
  return result;
}

std::vector<std::uint32_t> max_lengths(const RunResult& result) {
  std::vector<std::uint32_t> out;
  out.reserve(result.rounds.size());
  for (const auto& t : result.rounds) out.push_back(t.max_len);
  return out;
}

int configure_threads_from_env() {
#ifdef _OPENMP
  omp_set_max_active_levels(1);
  if (const char* env = std::getenv("CYCLEMR_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) omp_set_num_threads(static_cast<int>(v));
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cyclemr
