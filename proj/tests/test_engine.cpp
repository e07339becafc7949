#include <gtest/gtest.h>
#include <omp.h>

#include <fstream>
#include <set>
#include <sstream>

#include "cyclemr/engine.hpp"
#include "cyclemr/reference.hpp"
#include "cyclemr/rng.hpp"
#include "cyclemr/trace.hpp"
#include "support.hpp"

using namespace cyclemr;

namespace {

std::vector<MachineIndex> route(const Strategy& s, const std::vector<PointId>& ids, const Config& cfg, Round r = 2,
                                std::uint64_t digest = 0) {
  std::vector<MachineIndex> t;
  s.route(StrategyView(ids, {}, digest, nullptr, r, 0, cfg), t);
  return t;
}

Config small_config(PointId n, std::uint32_t machines, std::uint32_t cap, std::uint32_t rounds = 200) {
  return make_config(n, 0.5, 2, 1, kDefaultMemoryFactor, rounds, machines, cap);
}

std::string trace_text(const RunResult& r, bool verbose, const std::string& run_id = "t") {
  std::ostringstream out;
  write_trace(out, r, run_id, verbose);
  return out.str();
}

class FixedRoute : public Strategy {
 public:
  explicit FixedRoute(std::vector<MachineIndex> t) : t_(std::move(t)) {}
  std::string name() const override { return "fixed"; }
  void route(const StrategyView&, std::vector<MachineIndex>& targets) const override { targets = t_; }

 private:
  std::vector<MachineIndex> t_;
};

}  // namespace

TEST(Config, BudgetsFollowTheExponent) {
  EXPECT_EQ(sublinear_budget(1024, 0.5), 32u);
  EXPECT_EQ(sublinear_budget(4096, 0.5), 64u);
  EXPECT_EQ(sublinear_budget(1000, 0.5), 32u);  // ceil(31.6)
  const auto c = make_config(1024, 0.5, 2, 1);
  EXPECT_EQ(c.machines, 32u);
  EXPECT_EQ(c.memory_cap, 128u);
  const auto unit = make_config(1024, 0.5, 2, 1, 1.0);
  EXPECT_EQ(unit.memory_cap, 32u);
  EXPECT_EQ(min_deciding_length(1024), 514u);
  EXPECT_GT(min_deciding_length(1023), 1024u / 2);
}

TEST(Placement, RoundRobinByModulus) {
  const auto inst = random_one_cycle(4, 3);
  const auto st = init_placement(inst, small_config(4, 2, 3), {});
  ASSERT_EQ(st.size(), 2u);
  auto ids = [](const MachineState& m) {
    std::set<PointId> s;
    for (const auto& p : m.inbox) s.insert(p.front());
    return s;
  };
  EXPECT_EQ(ids(st[0]), (std::set<PointId>{0, 2, 4}));
  EXPECT_EQ(ids(st[1]), (std::set<PointId>{1, 3}));
}

TEST(Placement, ReplicatedToAllMachines) {
  const auto inst = random_one_cycle(6, 3);
  const auto st = init_placement(inst, small_config(6, 3, 7), {PlacementMode::replicated, 3, 0});
  for (const auto& m : st) EXPECT_EQ(m.inbox.size(), 7u);
  EXPECT_THROW(init_placement(inst, small_config(6, 3, 6), {PlacementMode::replicated, 3, 0}), CycleError);
}

TEST(Placement, SeededRandomIsRepeatable) {
  const auto inst = random_one_cycle(63, 3);
  const auto cfg = small_config(63, 8, 8);
  const Placement p{PlacementMode::seeded_random, 1, 42};
  const auto a = init_placement(inst, cfg, p);
  const auto b = init_placement(inst, cfg, p);
  const auto c = init_placement(inst, cfg, Placement{PlacementMode::seeded_random, 1, 43});
  bool differs = false;
  std::uint32_t total = 0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    ASSERT_EQ(a[m].inbox.size(), b[m].inbox.size());
    for (std::size_t i = 0; i < a[m].inbox.size(); ++i) EXPECT_TRUE(a[m].inbox[i].same_path(b[m].inbox[i]));
    total += static_cast<std::uint32_t>(a[m].inbox.size());
    if (a[m].inbox.size() != c[m].inbox.size() || (!a[m].inbox.empty() && !a[m].inbox[0].same_path(c[m].inbox[0]))) differs = true;
  }
  EXPECT_EQ(total, 64u);
  EXPECT_TRUE(differs);
}

TEST(Placement, InfeasibleCapacity) {
  const auto inst = random_one_cycle(1024, 1);
  EXPECT_THROW(init_placement(inst, make_config(1024, 0.5, 2, 1, 1.0), {}), CycleError);
}

TEST(Strategy, IdBlock) {
  const auto cfg = small_config(16, 4, 8);
  const auto s = make_id_block();
  EXPECT_EQ(route(*s, {5}, cfg), (std::vector<MachineIndex>{1}));
  EXPECT_EQ(route(*s, {7, 2, 9}, cfg, 2), route(*s, {7, 2, 9}, cfg, 30));
  EXPECT_EQ(route(*s, {7, 2, 9}, cfg).size(), 1u);
}

TEST(Strategy, EndpointHashSingletonAndRepeatability) {
  const auto cfg = small_config(1024, 32, 128);
  const auto s = make_endpoint_hash(9);
  for (PointId a = 0; a < 100; ++a) {
    const auto t = route(*s, {a}, cfg, 3);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t, route(*make_endpoint_hash(9), {a}, cfg, 3));
    EXPECT_EQ(route(*s, {a, 500}, cfg, 3)[0] == t[0] || route(*s, {a, 500}, cfg, 3).back() == t[0], true);
  }
}

TEST(Strategy, EndpointHashIsUniform) {
  const auto cfg = small_config(1 << 14, 32, 128);
  const auto s = make_endpoint_hash(3);
  std::vector<std::uint64_t> counts(32, 0);
  for (PointId a = 0; a < 10000; ++a)
    for (auto m : route(*s, {a}, cfg, 5)) ++counts[m];
  EXPECT_LT(stats::chi_square_uniform(counts), stats::chi_square_bound(31));
}

TEST(Strategy, ReplicatingHash) {
  const auto cfg = small_config(1024, 32, 128);
  const auto two = make_replicating_hash(2, 4);
  const auto base = make_endpoint_hash(4);
  const auto four = make_replicating_hash(4, 4);
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const PointId a = static_cast<PointId>(rng.below(1025)), b = static_cast<PointId>(rng.below(1025));
    const std::vector<PointId> p = a == b ? std::vector<PointId>{a} : std::vector<PointId>{a, b};
    EXPECT_EQ(route(*two, p, cfg), route(*base, p, cfg));
    EXPECT_LE(route(*four, p, cfg).size(), 4u);
  }
  EXPECT_THROW(make_replicating_hash(1, 4), CycleError);
}

TEST(Strategy, Registry) {
  for (const auto& name : shipped_strategies()) EXPECT_TRUE(is_known_strategy(name));
  EXPECT_TRUE(is_known_strategy("all-to-zero"));
  EXPECT_FALSE(is_known_strategy("nope"));
  EXPECT_THROW(strategy_factory("nope"), CycleError);
}

TEST(Engine, OverflowIsTraced) {
  const auto inst = random_one_cycle(1024, 2);
  const auto cfg = make_config(1024, 0.5, 2, 1);
  const auto res = run(inst, *make_all_to_zero(), cfg);
  ASSERT_TRUE(res.violation);
  EXPECT_EQ(res.decision, Decision::memory_exceeded);
  EXPECT_EQ(res.violation->machine, 0u);
  EXPECT_EQ(res.violation->round, 2u);  // round 1 only reduces the placement
  EXPECT_GT(res.violation->inbox, cfg.memory_cap);
  EXPECT_TRUE(res.rounds.back().aborted);
  const auto text = trace_text(res, false);
  EXPECT_NE(text.find("\"event\":\"memory_exceeded\""), std::string::npos);
}

TEST(Engine, ReplicationOverflowsTightMemory) {
  const auto inst = random_one_cycle(255, 2);
  const auto cfg = make_config(255, 0.5, 2, 1, 1.0, 100, 16, 17);
  const auto res = run(inst, *make_replicating_hash(6, 1), cfg);
  EXPECT_EQ(res.decision, Decision::memory_exceeded);
  ASSERT_TRUE(res.violation);
}

TEST(Engine, SingleMachineDecidesInRoundOne) {
  const auto inst = random_one_cycle(64, 2);
  const auto cfg = small_config(64, 1, 65);
  const auto res = run(inst, *make_endpoint_hash(1), cfg);
  EXPECT_EQ(res.decision, Decision::single_cycle_evidence);
  EXPECT_EQ(res.decision_round, 1u);
  EXPECT_EQ(res.rounds[0].max_len, 65u);
}

TEST(Engine, TwoCycleNeverDecides) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = two_cycle_instance(255, s);
    for (const auto& name : shipped_strategies()) {
      const auto cfg = small_config(255, 16, 64, 300);
      const auto res = run(inst, *strategy_factory(name, {s, 3})(inst), cfg);
      EXPECT_NE(res.decision, Decision::single_cycle_evidence);
      for (const auto& r : res.rounds) EXPECT_LE(r.max_len, 128u);
    }
    // Even a single all-knowing machine only sees two 128-cycles.
    const auto res = run(inst, *make_id_block(), small_config(255, 1, 256, 5));
    EXPECT_EQ(res.decision, Decision::undecided);
    EXPECT_EQ(res.rounds[0].max_len, 128u);
  }
}

TEST(Engine, EmptyRouteIsRejected) {
  const auto inst = random_one_cycle(16, 2);
  EXPECT_THROW(run(inst, FixedRoute({}), small_config(16, 4, 17)), CycleError);
  EXPECT_THROW(run(inst, FixedRoute({9}), small_config(16, 4, 17)), CycleError);
}

TEST(Engine, RoundInvariantsOnFullTrace) {
  Rng rng(8);
  for (int trial = 0; trial < 12; ++trial) {
    const PointId n = 64 + static_cast<PointId>(rng.below(100));
    const auto inst = rng.below(2) ? random_one_cycle(n, rng.next()) : two_cycle_instance(n, rng.next(), false);
    const auto name = shipped_strategies()[rng.below(3)];
    const auto cfg = small_config(n, 8, 64, 60);
    RunOptions ro;
    ro.trace = TraceLevel::full;
    const auto res = run(inst, *strategy_factory(name, {rng.next(), 3})(inst), cfg, ro);
    std::set<std::pair<PointId, PointId>> prev_edges;
    for (std::size_t r = 0; r < res.rounds.size(); ++r) {
      const auto& round = res.rounds[r];
      if (round.aborted) break;
      std::set<std::pair<PointId, PointId>> edges;
      for (std::size_t m = 0; m < round.machines.size(); ++m) {
        const auto& rec = round.machines[m];
        const auto again = reduce_set(rec.inbox, {round.round, static_cast<MachineIndex>(m)});
        ASSERT_EQ(again.size(), rec.outbox.size());
        for (std::size_t i = 0; i < again.size(); ++i) EXPECT_TRUE(again[i].same_path(rec.outbox[i]));
        for (std::size_t i = 0; i < rec.outbox.size(); ++i) {
          for (std::size_t j = i + 1; j < rec.outbox.size(); ++j) EXPECT_FALSE(intersects(rec.outbox[i], rec.outbox[j]));
          const auto pts = rec.outbox[i].points();
          for (std::size_t k = 0; k + 1 < pts.size(); ++k) edges.insert({pts[k], pts[k + 1]});
          if (rec.outbox[i].full_cycle() && pts.size() > 1) edges.insert({pts.back(), pts.front()});
        }
        if (r > 0) {
          // Every inbox path was some outbox path of the previous round.
          for (const auto& p : rec.inbox) {
            bool found = false;
            for (const auto& pm : res.rounds[r - 1].machines) {
              for (const auto& q : pm.outbox) found = found || q.same_path(p);
            }
            EXPECT_TRUE(found) << p.debug_string();
          }
        }
      }
      for (const auto& e : prev_edges) EXPECT_TRUE(edges.count(e)) << r;
      prev_edges = std::move(edges);
    }
  }
}

TEST(Engine, MatchesReferenceEvaluation) {
  Rng rng(31);
  const std::vector<Placement> placements{
      {}, {PlacementMode::seeded_random, 1, 5}, {PlacementMode::replicated, 2, 0}};
  for (int trial = 0; trial < 30; ++trial) {
    const PointId n = 8 + static_cast<PointId>(rng.below(120));
    const auto inst = rng.below(3) ? random_one_cycle(n, rng.next()) : two_cycle_instance(n, rng.next(), false);
    const auto name = shipped_strategies()[rng.below(3)];
    const auto placement = placements[rng.below(3)];
    const std::uint32_t machines = 2 + static_cast<std::uint32_t>(rng.below(10));
    const auto cfg = small_config(n, machines, n + 1, 40);
    const auto strategy = strategy_factory(name, {rng.next(), 3})(inst);
    RunOptions ro;
    ro.trace = TraceLevel::full;
    ro.placement = placement;
    const auto got = run(inst, *strategy, cfg, ro);
    const auto want = reference::run(inst, *strategy, cfg, placement, cfg.rounds);
    ASSERT_EQ(got.rounds.size(), want.rounds.size()) << inst.serialize() << " " << name;
    EXPECT_EQ(got.decision, want.decision);
    EXPECT_EQ(got.decision_round, want.decision_round);
    for (std::size_t r = 0; r < got.rounds.size(); ++r) {
      EXPECT_EQ(got.rounds[r].max_len, want.rounds[r].max_len);
      for (std::size_t m = 0; m < machines; ++m) {
        std::vector<reference::RefPath> out;
        for (const auto& p : got.rounds[r].machines[m].outbox) out.push_back(reference::to_ref(p));
        std::sort(out.begin(), out.end());
        auto ref = want.rounds[r].machines[m].outbox;
        std::sort(ref.begin(), ref.end());
        EXPECT_EQ(out, ref) << "round " << r + 1 << " machine " << m;
      }
    }
  }
}

TEST(Engine, ThreadCountDoesNotChangeTheTrace) {
  const auto inst = random_one_cycle(4096, 77);
  const auto cfg = make_config(4096, 0.5, 2, 77);
  RunOptions ro;
  ro.trace = TraceLevel::full;
  const int before = omp_get_max_threads();
  std::vector<std::string> traces;
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    traces.push_back(trace_text(run(inst, *make_replicating_hash(3, 77), cfg, ro), true));
  }
  omp_set_num_threads(before);
  EXPECT_EQ(traces[0], traces[1]);
  EXPECT_EQ(traces[0], traces[2]);
}

TEST(Engine, GoldenTrace) {
  const auto inst = random_one_cycle(256, 7);
  const auto cfg = make_config(256, 0.5, 2, 7);
  const auto strategy = make_endpoint_hash(7);
  RunOptions ro;
  ro.trace = TraceLevel::full;
  const auto res = run(inst, *strategy, cfg, ro);
  std::ifstream in(std::string(CYCLEMR_TEST_DATA) + "/golden/endpoint_hash_n256_s7.jsonl");
  ASSERT_TRUE(in) << "missing golden file";
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("\"type\":\"header\""), std::string::npos);
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(trace_text(res, false, "endpoint-hash-n256-s7"), golden.str());
  // The reference evaluation reaches the same round-by-round state.
  const auto ref = reference::run(inst, *strategy, cfg, {}, cfg.rounds);
  ASSERT_EQ(ref.rounds.size(), res.rounds.size());
  EXPECT_EQ(ref.decision_round, res.decision_round);
  for (std::size_t r = 0; r < ref.rounds.size(); ++r) {
    for (std::size_t m = 0; m < cfg.machines; ++m) {
      std::vector<reference::RefPath> got;
      for (const auto& p : res.rounds[r].machines[m].outbox) got.push_back(reference::to_ref(p));
      auto want = ref.rounds[r].machines[m].outbox;
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      EXPECT_EQ(got, want);
    }
  }
}

TEST(Trace, MaxLengthsRoundTrip) {
  const auto inst = random_one_cycle(1024, 3);
  const auto res = run(inst, *make_endpoint_hash(3), make_config(1024, 0.5, 2, 3));
  std::stringstream s;
  write_jsonl(s, provenance_header(ojson{{"n", 1024}}, 3));
  write_trace(s, res, "x", false);
  EXPECT_EQ(read_trace_max_lengths(s), max_lengths(res));
}
