#include <algorithm>
#include <numeric>
#include <sstream>

#include "cyclemr/verifier.hpp"
#include "verifier/enumerate.hpp"

namespace cyclemr {

namespace {

struct SigItem {
  MachineIndex machine;
  std::uint32_t offset;  // within H
  std::uint32_t length;
  std::uint64_t digest;
  friend auto operator<=>(const SigItem&, const SigItem&) = default;
};

std::uint32_t offset_in(const Path& base, const Path& p) {
  const auto size = base.cycle_size();
  return p.offset() >= base.offset() ? p.offset() - base.offset() : p.offset() + size - base.offset();
}

std::vector<SigItem> restriction_signature(const RoundTrace& t, const Path& h, const std::optional<Path>& window) {
  std::vector<SigItem> out;
  if (!window) return out;
  for (std::size_t m = 0; m < t.machines.size(); ++m) {
    for (const Path& p : t.machines[m].outbox) {
      if (window->contains(p)) {
        out.push_back(SigItem{static_cast<MachineIndex>(m), offset_in(h, p), p.size(), p.digest()});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> round_violation(const RoundTrace& t, const std::optional<Path>& window,
                                           const Thresholds& th) {
  for (std::size_t m = 0; m < t.machines.size(); ++m) {
    if (auto v = window_violation(t.machines[m].outbox, window, th)) {
      std::ostringstream os;
      os << "machine " << m << ": " << v->path.debug_string() << (v->contained ? " length " : " overlap ")
         << v->length;
      return os.str();
    }
  }
  return std::nullopt;
}

std::uint32_t default_rounds(const Config& config) {
  return std::max(1u, ilog(config.n, config.rho));
}

}  // namespace

InvarianceReport check_invariance(const Instance& i1, const Instance& i2, const std::vector<PointId>& h,
                                  const StrategyFactory& factory, const Config& config, MarginProfile profile,
                                  std::uint32_t rounds) {
  if (rounds == 0) rounds = default_rounds(config);
  const Path h1 = Path::from_ids(i1, h);
  const Path h2 = Path::from_ids(i2, h);
  InvarianceReport rep;
  rep.i1 = i1.serialize();
  rep.i2 = i2.serialize();
  rep.h = h;
  const RunResult a = run_for_check(i1, factory, config, rounds);
  const RunResult b = run_for_check(i2, factory, config, rounds);
  const std::size_t available = std::min(a.rounds.size(), b.rounds.size());
  for (std::size_t k = 0; k < available; ++k) {
    const RoundTrace& ta = a.rounds[k];
    const RoundTrace& tb = b.rounds[k];
    if (ta.aborted || tb.aborted) break;
    const Round r = ta.round;
    const Thresholds th = thresholds(profile, config.rho, r);
    const auto w1 = trim(h1, th.margin);
    const auto w2 = trim(h2, th.margin);
    InvarianceRound status;
    status.round = r;
    status.precondition = !round_violation(ta, w1, th);
    if (!status.precondition) {
      rep.precondition_failed_at = r;
      rep.rounds.push_back(status);
      break;
    }
    const auto v2 = round_violation(tb, w2, th);
    status.claim_i = !v2;
    const auto s1 = restriction_signature(ta, h1, w1);
    const auto s2 = restriction_signature(tb, h2, w2);
    status.claim_ii = s1 == s2;
    if ((!*status.claim_i || !*status.claim_ii) && !rep.first_failure) {
      rep.first_failure = r;
      if (v2) {
        rep.witness = "claim (i), I2 " + *v2;
      } else {
        // first item in the symmetric difference, shown as the path it stands for
        std::vector<SigItem> only1, only2;
        std::set_difference(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(only1));
        std::set_difference(s2.begin(), s2.end(), s1.begin(), s1.end(), std::back_inserter(only2));
        std::ostringstream os;
        os << "claim (ii)";
        if (!only1.empty()) {
          const auto& x = only1.front();
          const auto run = Path::run(i1, h[x.offset], x.length);
          os << ", I1 only: machine " << x.machine << " " << run.debug_string();
        }
        if (!only2.empty()) {
          const auto& x = only2.front();
          const auto run = Path::run(i2, h[x.offset], x.length);
          os << ", I2 only: machine " << x.machine << " " << run.debug_string();
        }
        rep.witness = os.str();
      }
    }
    rep.rounds.push_back(status);
  }
  return rep;
}

std::uint64_t ExhaustiveInvarianceReport::total_claim_i() const {
  return std::accumulate(claim_i_failures.begin(), claim_i_failures.end(), std::uint64_t{0});
}
std::uint64_t ExhaustiveInvarianceReport::total_claim_ii() const {
  return std::accumulate(claim_ii_failures.begin(), claim_ii_failures.end(), std::uint64_t{0});
}

namespace {

struct CompactPath {
  MachineIndex machine;
  std::uint32_t offset;  // location on the single cycle
  std::uint32_t length;
  std::uint64_t digest;
};

// Outboxes of every enumerated instance, per round.
struct RunCache {
  std::uint32_t rounds = 0;
  std::uint32_t cycle = 0;  // n + 1
  // [instance * rounds + (r-1)] -> paths; empty marker for aborted rounds is `alive`
  std::vector<std::vector<CompactPath>> paths;
  std::vector<std::uint32_t> alive_rounds;  // rounds completed without memory abort
};

RunCache build_cache(const StrategyFactory& factory, const Config& config, std::uint32_t rounds,
                     const std::vector<Instance>& instances) {
  RunCache cache;
  cache.rounds = rounds;
  cache.cycle = config.n + 1;
  cache.paths.resize(instances.size() * rounds);
  cache.alive_rounds.assign(instances.size(), 0);
  const auto count = static_cast<std::int64_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < count; ++i) {
    const RunResult res = run_for_check(instances[static_cast<std::size_t>(i)], factory, config, rounds);
    std::uint32_t alive = 0;
    for (const RoundTrace& t : res.rounds) {
      if (t.aborted) break;
      auto& slot = cache.paths[static_cast<std::size_t>(i) * rounds + (t.round - 1)];
      for (std::size_t m = 0; m < t.machines.size(); ++m) {
        for (const Path& p : t.machines[m].outbox) {
          slot.push_back(CompactPath{static_cast<MachineIndex>(m), p.offset(), p.size(), p.digest()});
        }
      }
      ++alive;
    }
    cache.alive_rounds[static_cast<std::size_t>(i)] = alive;
  }
  return cache;
}

struct HResult {
  std::vector<std::uint64_t> asserted, pre_fail, fail_i, fail_ii;
  std::optional<std::uint64_t> witness_h;  // index into the H list
  Round witness_round = 0;
  std::uint64_t witness_i1 = 0, witness_i2 = 0;
  bool witness_ii = false;
};

using Sig = std::vector<std::tuple<MachineIndex, std::uint32_t, std::uint32_t, std::uint64_t>>;

}  // namespace

ExhaustiveInvarianceReport check_invariance_exhaustive(const std::string& strategy_name,
                                                       const StrategyFactory& factory, const Config& config,
                                                       MarginProfile profile, std::uint32_t min_h,
                                                       std::uint64_t node_cap) {
  const PointId n = config.n;
  const std::uint64_t total = factorial(n);
  if (total > node_cap) {
    throw CycleError(Errc::cap_exceeded, std::to_string(total) + " instances exceed the cap of " +
                                             std::to_string(node_cap));
  }
  const std::uint32_t rounds = default_rounds(config);
  ExhaustiveInvarianceReport rep;
  rep.strategy = strategy_name;
  rep.n = n;
  rep.rho = config.rho;
  rep.profile = profile;
  rep.min_h = min_h;
  rep.rounds = rounds;
  rep.asserted_pairs.assign(rounds, 0);
  rep.precondition_fails.assign(rounds, 0);
  rep.claim_i_failures.assign(rounds, 0);
  rep.claim_ii_failures.assign(rounds, 0);

  const std::vector<Instance> instances = detail::all_one_cycle_instances(n);
  rep.instances = instances.size();
  const RunCache cache = build_cache(factory, config, rounds, instances);
  const std::vector<std::vector<PointId>> hs = detail::all_id_sequences(n, min_h, n);
  rep.paths_h = hs.size();
  const std::uint32_t C = cache.cycle;
  std::vector<Thresholds> th(rounds);
  for (std::uint32_t r = 1; r <= rounds; ++r) th[r - 1] = thresholds(profile, config.rho, r);

  HResult merged;
  merged.asserted.assign(rounds, 0);
  merged.pre_fail.assign(rounds, 0);
  merged.fail_i.assign(rounds, 0);
  merged.fail_ii.assign(rounds, 0);
  std::uint64_t incidences = 0;
  const auto hcount = static_cast<std::int64_t>(hs.size());

#pragma omp parallel
  {
    HResult local;
    local.asserted.assign(rounds, 0);
    local.pre_fail.assign(rounds, 0);
    local.fail_i.assign(rounds, 0);
    local.fail_ii.assign(rounds, 0);
    std::uint64_t local_inc = 0;
    std::vector<detail::Placed> placed;
    std::vector<char> alive, cond;
    std::vector<Sig> sigs;
    std::vector<std::size_t> order, group_size;

#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t hi = 0; hi < hcount; ++hi) {
      const auto& h = hs[static_cast<std::size_t>(hi)];
      const auto L = static_cast<std::uint32_t>(h.size());
      detail::instances_containing(n, h, placed);
      const std::size_t N = placed.size();
      local_inc += N;
      alive.assign(N, 1);
      cond.assign(N, 0);
      sigs.assign(N, {});
      for (std::uint32_t r = 1; r <= rounds; ++r) {
        const Thresholds& t = th[r - 1];
        const bool has_window = L > 2 * t.margin;
        const std::uint32_t wl = has_window ? L - 2 * t.margin : 0;
        for (std::size_t k = 0; k < N; ++k) {
          sigs[k].clear();
          const std::uint64_t inst = placed[k].index;
          if (cache.alive_rounds[inst] < r) {
            cond[k] = 0;  // aborted runs never satisfy the conditions
            continue;
          }
          bool ok = true;
          if (has_window) {
            const std::uint32_t w = (placed[k].h_location + t.margin) % C;
            for (const CompactPath& p : cache.paths[inst * rounds + (r - 1)]) {
              const std::uint32_t rel = (p.offset + C - w) % C;
              if (p.length < C && p.length <= wl && rel + p.length <= wl) {
                if (p.length > t.cap) ok = false;
                sigs[k].emplace_back(p.machine, rel, p.length, p.digest);
              } else {
                std::uint32_t ov = 0;
                if (p.length >= C) {
                  ov = wl;
                } else {
                  const std::uint32_t d = (w + C - p.offset) % C;
                  if (d < p.length) ov = std::min(p.length - d, wl);
                  if (rel < wl) ov = std::max(ov, std::min(wl - rel, p.length));
                }
                if (ov > t.overhang) ok = false;
              }
            }
            std::sort(sigs[k].begin(), sigs[k].end());
          }
          cond[k] = ok ? 1 : 0;
        }
        std::uint64_t g = 0, bad = 0;
        for (std::size_t k = 0; k < N; ++k) {
          if (alive[k] && !cond[k]) {
            ++local.pre_fail[r - 1];
            alive[k] = 0;
          }
          g += alive[k];
          bad += cond[k] ? 0 : 1;
        }
        if (g == 0) break;
        local.asserted[r - 1] += g * N;
        local.fail_i[r - 1] += g * bad;
        // group equal signatures
        order.resize(N);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigs[a] < sigs[b]; });
        group_size.assign(N, 0);
        for (std::size_t lo = 0; lo < N;) {
          std::size_t hi2 = lo + 1;
          while (hi2 < N && sigs[order[hi2]] == sigs[order[lo]]) ++hi2;
          for (std::size_t q = lo; q < hi2; ++q) group_size[order[q]] = hi2 - lo;
          lo = hi2;
        }
        std::uint64_t fails_ii = 0;
        for (std::size_t k = 0; k < N; ++k) {
          if (alive[k]) fails_ii += N - group_size[k];
        }
        local.fail_ii[r - 1] += fails_ii;
        const bool failing = fails_ii > 0 || (bad > 0);
        if (failing && (!local.witness_h || static_cast<std::uint64_t>(hi) < *local.witness_h)) {
          std::size_t i1 = 0;
          while (!alive[i1]) ++i1;
          std::size_t i2 = 0;
          if (fails_ii > 0) {
            for (std::size_t k = 0; k < N; ++k) {
              if (alive[k] && group_size[k] < N) {
                i1 = k;
                break;
              }
            }
            while (sigs[i2] == sigs[i1]) ++i2;
          } else {
            while (cond[i2]) ++i2;
          }
          local.witness_h = static_cast<std::uint64_t>(hi);
          local.witness_round = r;
          local.witness_i1 = placed[i1].index;
          local.witness_i2 = placed[i2].index;
          local.witness_ii = fails_ii > 0;
        }
      }
    }
#pragma omp critical
    {
      for (std::uint32_t r = 0; r < rounds; ++r) {
        merged.asserted[r] += local.asserted[r];
        merged.pre_fail[r] += local.pre_fail[r];
        merged.fail_i[r] += local.fail_i[r];
        merged.fail_ii[r] += local.fail_ii[r];
      }
      incidences += local_inc;
      if (local.witness_h && (!merged.witness_h || *local.witness_h < *merged.witness_h)) {
        merged.witness_h = local.witness_h;
        merged.witness_round = local.witness_round;
        merged.witness_i1 = local.witness_i1;
        merged.witness_i2 = local.witness_i2;
        merged.witness_ii = local.witness_ii;
      }
    }
  }
  rep.instance_h = incidences;
  rep.asserted_pairs = merged.asserted;
  rep.precondition_fails = merged.pre_fail;
  rep.claim_i_failures = merged.fail_i;
  rep.claim_ii_failures = merged.fail_ii;
  if (merged.witness_h) {
    rep.witness = InvarianceWitness{instances[merged.witness_i1].serialize(), instances[merged.witness_i2].serialize(),
                                    hs[*merged.witness_h], merged.witness_round, merged.witness_ii ? "ii" : "i"};
  }
  return rep;
}

}  // namespace cyclemr
