#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cyclemr/path.hpp"
#include "cyclemr/rng.hpp"
#include "oracles.hpp"

using namespace cyclemr;
using namespace cyclemr::oracle;

namespace {

std::vector<PointId> ids(const Path& p) { return p.points(); }

Path run_of(const Instance& inst, PointId first, std::uint32_t len) { return Path::run(inst, first, len); }

}  // namespace

TEST(Path, DebugFormat) {
  const auto inst = Instance::one_cycle({3, 4, 1, 2});
  EXPECT_EQ(run_of(inst, 4, 3).debug_string(), "[4,1,2]@(2,3)");
  EXPECT_EQ(Path::point(inst, 0).debug_string(), "[0]@(0,1)");
}

TEST(Path, RunWrapsAndValidates) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5});
  EXPECT_EQ(ids(run_of(inst, 4, 4)), (std::vector<PointId>{4, 5, 0, 1}));
  EXPECT_EQ(ids(Path::from_ids(inst, std::vector<PointId>{5, 0, 1})), (std::vector<PointId>{5, 0, 1}));
  EXPECT_THROW(Path::from_ids(inst, std::vector<PointId>{1, 3}), CycleError);
  EXPECT_THROW(run_of(inst, 9, 1), CycleError);
  EXPECT_THROW(run_of(inst, 1, 7), CycleError);
  EXPECT_THROW(run_of(inst, 1, 0), CycleError);
  const auto full = run_of(inst, 3, 6);
  EXPECT_TRUE(full.full_cycle());
  EXPECT_EQ(full.offset(), 0u);
}

TEST(Path, IntersectsCases) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7});
  EXPECT_TRUE(intersects(run_of(inst, 1, 3), run_of(inst, 3, 2)));   // shared point
  EXPECT_TRUE(intersects(run_of(inst, 1, 2), run_of(inst, 3, 2)));   // touching
  EXPECT_FALSE(intersects(run_of(inst, 1, 2), run_of(inst, 4, 2)));  // gap at 3
  EXPECT_TRUE(intersects(run_of(inst, 6, 3), run_of(inst, 1, 2)));   // touching across the pivot
  EXPECT_FALSE(intersects(run_of(inst, 6, 3), run_of(inst, 2, 2)));
  const auto other = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7});
  EXPECT_THROW(intersects(run_of(inst, 1, 1), run_of(other, 1, 1)), CycleError);
  const auto two = Instance::two_cycle({1, 2}, {3, 4, 5});
  EXPECT_FALSE(intersects(run_of(two, 2, 1), run_of(two, 3, 1)));
}

TEST(Path, MergeExamples) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7});
  const auto m = merge(run_of(inst, 1, 3), run_of(inst, 3, 2), {2, 0});
  EXPECT_EQ(ids(m), (std::vector<PointId>{1, 2, 3, 4}));
  const auto p = run_of(inst, 2, 3);
  EXPECT_TRUE(merge(p, p, {2, 0}).same_arc(p));
  EXPECT_THROW(merge(run_of(inst, 1, 1), run_of(inst, 3, 1), {2, 0}), CycleError);
}

TEST(Path, MergeOfOverlappingSplitsRestoresThePath) {
  const auto inst = random_one_cycle(20, 3);
  for (std::uint32_t k = 1; k <= 12; ++k) {
    const auto whole = run_of(inst, 5, k);
    const auto pts = whole.points();
    for (std::uint32_t a_end = 1; a_end <= k; ++a_end) {
      for (std::uint32_t b_start = 0; b_start <= a_end && b_start < k; ++b_start) {
        const auto a = run_of(inst, pts[0], a_end);
        const auto b = run_of(inst, pts[b_start], k - b_start);
        EXPECT_TRUE(merge(a, b, {1, 0}).same_arc(whole)) << k << " " << a_end << " " << b_start;
      }
    }
  }
}

TEST(Path, MergeCoversWholeCycle) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4});
  const auto m = merge(run_of(inst, 3, 3), run_of(inst, 1, 3), {1, 0});
  EXPECT_TRUE(m.full_cycle());
  EXPECT_EQ(m.offset(), 0u);
  EXPECT_EQ(m.size(), 5u);
}

TEST(ReduceSet, Examples) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6});
  const PathSet chain{run_of(inst, 1, 2), run_of(inst, 3, 2), run_of(inst, 2, 2)};
  const auto r = reduce_set(chain, {1, 0});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(ids(r[0]), (std::vector<PointId>{1, 2, 3, 4}));
  const PathSet apart{run_of(inst, 1, 1), run_of(inst, 3, 2)};
  const auto same = reduce_set(apart, {1, 0});
  EXPECT_EQ(point_lists(same), point_lists(apart));
  EXPECT_TRUE(reduce_set(PathSet{}, {1, 0}).empty());
}

TEST(ReduceSet, MatchesIntervalUnionOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_instance(rng);
    PathSet ps;
    const auto k = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < k; ++i) ps.push_back(random_path(inst, rng, 1 + static_cast<std::uint32_t>(rng.below(8))));
    const auto out = reduce_set(ps, {2, 0});
    EXPECT_EQ(arcs_of(out), interval_union(inst, ps)) << inst.serialize();
    EXPECT_EQ(out.size(), arcs_of(out).size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) EXPECT_FALSE(intersects(out[i], out[j]));
    }
  }
}

TEST(ReduceSet, ConfluentUnderInputOrder) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng);
    PathSet ps;
    for (int i = 0; i < 10; ++i) ps.push_back(random_path(inst, rng, 6));
    const auto base = reduce_set(ps, {3, 1});
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      rng.shuffle(std::span<Path>(ps));
      const auto again = reduce_set(ps, {3, 1});
      ASSERT_EQ(again.size(), base.size());
      for (std::size_t i = 0; i < base.size(); ++i) EXPECT_TRUE(again[i].same_path(base[i]));
    }
    // Pairwise merging in a random order reaches the same arcs.
    PathSet work = ps;
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < work.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < work.size() && !merged; ++j) {
          if (intersects(work[i], work[j])) {
            work[i] = merge(work[i], work[j], {3, 1});
            work.erase(work.begin() + static_cast<std::ptrdiff_t>(j));
            merged = true;
          }
        }
      }
    }
    EXPECT_EQ(arcs_of(work), arcs_of(base));
  }
}

TEST(ReduceSet, DropsExactDuplicates) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7, 8});
  const auto p = run_of(inst, 2, 2);
  const auto r = reduce_set(PathSet{p, p, p}, {2, 0});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].same_path(p));
}

TEST(History, LeavesMatchPoints) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_one_cycle(30, rng.next());
    PathSet ps;
    for (PointId id = 0; id <= 30; ++id) {
      if (rng.below(2)) ps.push_back(Path::point(inst, id));
    }
    PathSet out = reduce_set(ps, {1, 0});
    for (const auto& p : out) {
      auto leaves = history_leaves(p.history());
      auto pts = p.points();
      std::sort(leaves.begin(), leaves.end());
      std::sort(pts.begin(), pts.end());
      EXPECT_EQ(leaves, pts);
    }
  }
}

TEST(History, MergeRecordsContext) {
  const auto inst = Instance::one_cycle({1, 2, 3});
  const auto m = merge(Path::point(inst, 1), Path::point(inst, 2), {4, 7});
  ASSERT_TRUE(m.history());
  EXPECT_EQ(m.history()->kind, HistoryNode::Kind::merge);
  EXPECT_EQ(m.history()->round, 4u);
  EXPECT_EQ(m.history()->machine, 7u);
  EXPECT_EQ(history_leaves(m.history()), (std::vector<PointId>{1, 2}));
  EXPECT_NE(m.digest(), merge(Path::point(inst, 1), Path::point(inst, 2), {4, 8}).digest());
}

TEST(Trim, Examples) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7, 8});
  const auto t = trim(run_of(inst, 1, 5), 1);
  ASSERT_TRUE(t);
  EXPECT_EQ(ids(*t), (std::vector<PointId>{2, 3, 4}));
  const auto p = run_of(inst, 3, 4);
  EXPECT_TRUE(trim(p, 0)->same_path(p));
  EXPECT_FALSE(trim(run_of(inst, 1, 4), 2));
}

TEST(Trim, LengthFormulaExhaustive) {
  const auto inst = random_one_cycle(15, 8);
  for (std::uint32_t len = 1; len <= 12; ++len) {
    for (std::uint32_t t = 0; t <= 6; ++t) {
      const auto p = run_of(inst, 4, len);
      const auto r = trim(p, t);
      const std::uint32_t want = len > 2 * t ? len - 2 * t : 0;
      EXPECT_EQ(r ? r->size() : 0u, want);
      if (r) {
        const auto pts = p.points();
        EXPECT_EQ(ids(*r), std::vector<PointId>(pts.begin() + t, pts.end() - t));
      }
    }
  }
}

TEST(Common, Examples) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6});
  const auto c = common(run_of(inst, 2, 3), run_of(inst, 3, 3));
  ASSERT_TRUE(c);
  EXPECT_EQ(ids(*c), (std::vector<PointId>{3, 4}));
  const auto p = run_of(inst, 1, 4);
  EXPECT_TRUE(common(p, p)->same_path(p));
  EXPECT_FALSE(common(run_of(inst, 1, 2), run_of(inst, 4, 2)));
}

// Brute force: the longest run of consecutive members of `a` that also lie in `b`.
TEST(Common, MatchesBruteForceOverAllSubpathPairs) {
  const auto inst = random_one_cycle(7, 21);
  std::vector<Path> all;
  for (PointId s = 0; s <= 7; ++s) {
    for (std::uint32_t len = 1; len <= 8; ++len) all.push_back(run_of(inst, s, len));
  }
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto bp = b.points();
      const std::set<PointId> in_b(bp.begin(), bp.end());
      const auto ap = a.points();
      std::uint32_t best = 0, cur = 0;
      for (int pass = 0; pass < 2; ++pass) {
        for (auto id : ap) {
          cur = in_b.count(id) ? cur + 1 : 0;
          best = std::max(best, std::min(cur, static_cast<std::uint32_t>(ap.size())));
        }
        if (!a.full_cycle()) break;  // only a full cycle wraps onto itself
      }
      best = std::min<std::uint32_t>(best, static_cast<std::uint32_t>(std::min(ap.size(), bp.size())));
      const auto c = common(a, b);
      EXPECT_EQ(c ? c->size() : 0u, best) << a.debug_string() << " " << b.debug_string();
      if (c) {
        EXPECT_TRUE(a.contains(*c));
        EXPECT_TRUE(b.contains(*c));
      }
    }
  }
}

TEST(Restrict, Examples) {
  const auto inst = Instance::one_cycle({1, 2, 3, 4, 5, 6, 7});
  const PathSet t{run_of(inst, 2, 2), run_of(inst, 4, 3)};
  const auto r = restrict_to(t, run_of(inst, 1, 4));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(ids(r[0]), (std::vector<PointId>{2, 3}));
  EXPECT_EQ(restrict_to(t, run_of(inst, 0, 8)).size(), 2u);
}

TEST(Restrict, OperatorIdentities) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_instance(rng);
    PathSet t;
    for (int i = 0; i < 6; ++i) t.push_back(random_path(inst, rng, 10));
    const auto p = random_path(inst, rng);
    const auto tp = restrict_to(t, p);
    EXPECT_EQ(point_lists(meet(tp, p)), unique_point_lists(tp)) << "(T|P)^P";
    const auto tm = meet(t, p);
    EXPECT_EQ(point_lists(restrict_to(tm, p)), point_lists(tm)) << "(T^P)|P";
  }
}
