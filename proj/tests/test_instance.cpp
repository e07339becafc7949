#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cyclemr/instance.hpp"
#include "cyclemr/tree.hpp"
#include "support.hpp"

using namespace cyclemr;

TEST(Instance, SerializeRoundTrip) {
  const auto one = Instance::one_cycle({3, 4, 1, 2});
  EXPECT_EQ(one.serialize(), "one-cycle;4;3,4,1,2");
  EXPECT_EQ(Instance::parse(one.serialize()), one);
  const auto two = Instance::two_cycle({2, 5}, {1, 3, 4});
  EXPECT_EQ(Instance::parse(two.serialize()), two);
  EXPECT_EQ(Instance::parse(two.serialize()).serialize(), two.serialize());
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto r = random_one_cycle(17, s);
    EXPECT_EQ(Instance::parse(r.serialize()), r);
    const auto t = two_cycle_instance(17, s);
    EXPECT_EQ(Instance::parse(t.serialize()), t);
  }
}

TEST(Instance, RejectsBadInput) {
  EXPECT_THROW(Instance::one_cycle({1, 1, 2}), CycleError);
  EXPECT_THROW(Instance::one_cycle({1, 2, 4}), CycleError);
  EXPECT_THROW(Instance::parse("one-cycle;3;1,2"), CycleError);
  EXPECT_THROW(Instance::parse("garbage"), CycleError);
  EXPECT_THROW(two_cycle_instance(4, 1, true), CycleError);  // 5 points cannot split evenly
}

TEST(Instance, PivotAndBijectionExhaustiveAtFour) {
  std::vector<PointId> perm{1, 2, 3, 4};
  do {
    const auto inst = Instance::one_cycle(perm);
    EXPECT_EQ(inst.at(0), 0u);
    EXPECT_EQ(inst.location_of(0), 0u);
    for (PointId id = 0; id <= 4; ++id) EXPECT_EQ(inst.at(inst.location_of(id)), id);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Instance, SuccessorFollowsListedOrder) {
  const auto inst = Instance::one_cycle({3, 4, 1, 2});
  EXPECT_EQ(inst.successor(3), 4u);
  EXPECT_EQ(inst.successor(2), 0u);
  EXPECT_EQ(inst.successor(0), 3u);
  EXPECT_THROW(inst.successor(9), CycleError);
}

TEST(Instance, SuccessorClosesTheCycle) {
  const auto inst = random_one_cycle(31, 5);
  for (PointId start = 0; start <= 31; ++start) {
    PointId p = start;
    for (int i = 0; i < 32; ++i) {
      p = inst.successor(p);
      if (i < 31) EXPECT_NE(p, start);
    }
    EXPECT_EQ(p, start);
  }
}

TEST(Instance, TwoCycleOrbitsStayInTheirHalf) {
  const auto inst = two_cycle_instance(3, 11);  // 4 points, two 2-cycles
  ASSERT_EQ(inst.cycle_count(), 2u);
  EXPECT_EQ(inst.cycle(0).size, 2u);
  EXPECT_EQ(inst.cycle(1).size, 2u);
  for (PointId id = 0; id <= 3; ++id) {
    const auto c = inst.cycle_of(inst.location_of(id));
    EXPECT_EQ(inst.cycle_of(inst.location_of(inst.successor(id))), c);
    EXPECT_EQ(inst.successor(inst.successor(id)), id);
  }
  const auto big = two_cycle_instance(63, 2);
  for (PointId start : {PointId{0}, big.at(big.cycle(1).begin)}) {
    std::uint32_t orbit = 0;
    PointId p = start;
    do {
      p = big.successor(p);
      ++orbit;
    } while (p != start);
    EXPECT_EQ(orbit, 32u);
  }
}

TEST(Instance, NonStrictTwoCycleUsesCeilingHalf) {
  const auto inst = two_cycle_instance(8, 3, false);  // 9 points
  EXPECT_EQ(inst.cycle(0).size + inst.cycle(1).size, 9u);
  EXPECT_EQ(std::max(inst.cycle(0).size, inst.cycle(1).size), 5u);
}

TEST(Instance, TwoCycleHalfMembershipIsFair) {
  // The pivot is always on the first cycle; the remaining first-half slots are
  // shared uniformly by IDs 1..n.
  const PointId n = 15;
  const int draws = 10000;
  std::vector<std::uint64_t> first(n + 1, 0);
  for (int s = 0; s < draws; ++s) {
    const auto inst = two_cycle_instance(n, static_cast<std::uint64_t>(s));
    for (PointId id = 1; id <= n; ++id) {
      if (inst.cycle_of(inst.location_of(id)) == 0) ++first[id];
    }
  }
  const double p = 7.0 / 15.0;  // (ceil(16/2) - 1) / n
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (PointId id = 1; id <= n; ++id) EXPECT_NEAR(static_cast<double>(first[id]), draws * p, 3.5 * sigma) << id;
}

TEST(Instance, RandomOneCycleIsUniform) {
  std::map<std::string, std::uint64_t> seen;
  for (int s = 0; s < 24000; ++s) ++seen[random_one_cycle(4, static_cast<std::uint64_t>(s)).serialize()];
  ASSERT_EQ(seen.size(), 24u);
  std::vector<std::uint64_t> counts;
  for (auto& [k, v] : seen) counts.push_back(v);
  EXPECT_LT(stats::chi_square_uniform(counts), stats::chi_square_bound(23));
}

TEST(Arc, IndexArithmetic) {
  const auto a = arc(4, 2, 1, 1);
  EXPECT_EQ(a.locations(), (std::vector<Location>{1, 2}));
  EXPECT_EQ(arc(4, 2, 1, 2).locations(), (std::vector<Location>{3, 4}));
  EXPECT_EQ(arc(4, 2, 0, 3).locations(), (std::vector<Location>{3}));
  const auto big = arc(16, 4, 2, 1);
  EXPECT_EQ(big.first, 1u);
  EXPECT_EQ(big.length, 16u);
  EXPECT_THROW(arc(4, 2, 1, 3), CycleError);
  EXPECT_THROW(arc(4, 2, 1, 0), CycleError);
}

TEST(Arc, LevelTilesAllButThePivot) {
  for (unsigned r = 0; r <= 3; ++r) {
    std::vector<Location> all;
    for (std::uint64_t k = 1; k <= 8u >> r; ++k) {
      for (auto l : arc(8, 2, r, k).locations()) all.push_back(l);
    }
    std::vector<Location> want(8);
    std::iota(want.begin(), want.end(), 1);
    EXPECT_EQ(all, want);
  }
}

TEST(Tree, FigureOneCounts) {
  const auto root = build_tree(4, 2);
  const auto level1 = root.children();
  EXPECT_EQ(level1.size(), 12u);
  for (const auto& s : level1) EXPECT_EQ(s.children().size(), 2u);
  EXPECT_EQ(level_counts(4, 2), (std::vector<std::uint64_t>{1, 12, 24}));
  const auto e = enumerate_tree(4, 2);
  EXPECT_EQ(e.counts, (std::vector<std::uint64_t>{1, 12, 24}));
  std::set<Segment> leaves(e.leaves.begin(), e.leaves.end());
  EXPECT_EQ(leaves.size(), 24u);
  for (const auto& leaf : leaves) EXPECT_TRUE(std::is_permutation(leaf.begin(), leaf.end(), Segment{1, 2, 3, 4}.begin()));
}

TEST(Tree, ChildrenOfFigureOnePartition) {
  const auto s = PartitionNode::parse(4, 2, "1,2|3,4");
  const auto kids = s.children();
  ASSERT_EQ(kids.size(), 2u);
  std::set<std::string> names;
  for (const auto& k : kids) names.insert(k.to_string());
  EXPECT_EQ(names, (std::set<std::string>{"1,2,3,4", "3,4,1,2"}));
  EXPECT_THROW(kids.front().children(), CycleError);
}

TEST(Tree, SingleLevelRootChildrenArePermutations) {
  const auto root = build_tree(3, 3);
  EXPECT_EQ(root.children().size(), 6u);
  for (const auto& c : root.children()) EXPECT_TRUE(c.is_leaf());
}

// Independent count: ordered pairs of 4 distinct segments into 2 groups,
// groups unordered among themselves = 4!/2!.
TEST(Tree, LevelOneAtEightHasTwelveChildren) {
  const auto root = build_tree(8, 2);
  int checked = 0;
  for (const auto& s : root.children()) {
    if (++checked > 50) break;
    const auto kids = s.children();
    EXPECT_EQ(kids.size(), 12u);
    EXPECT_EQ(s.child_count(), 12u);
    std::set<std::string> uniq;
    for (const auto& k : kids) {
      uniq.insert(k.to_string());
      EXPECT_EQ(k.parent(), s);
    }
    EXPECT_EQ(uniq.size(), 12u);
  }
  EXPECT_EQ(root.children().size(), 1680u);
}

TEST(Tree, CapIsEnforced) {
  EXPECT_THROW(enumerate_tree(8, 2, 10), CycleError);
  EXPECT_THROW(build_tree(6, 2), CycleError);
}

TEST(Tree, SampleFromFigureOneSubtreeIsFair) {
  const auto s = PartitionNode::parse(4, 2, "1,2|3,4");
  std::map<std::string, int> seen;
  for (int i = 0; i < 4000; ++i) ++seen[s.sample(static_cast<std::uint64_t>(i)).serialize()];
  ASSERT_EQ(seen.size(), 2u);
  for (auto& [k, v] : seen) EXPECT_NEAR(v, 2000, 5 * std::sqrt(1000.0)) << k;
  const auto leaf = PartitionNode::parse(4, 2, "3,4,1,2");
  EXPECT_EQ(leaf.sample(9).serialize(), "one-cycle;4;3,4,1,2");
}

TEST(Tree, RootSamplingIsUniform) {
  const auto root = build_tree(4, 2);
  std::map<std::string, std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) ++seen[root.sample(static_cast<std::uint64_t>(i)).serialize()];
  ASSERT_EQ(seen.size(), 24u);
  std::vector<std::uint64_t> counts;
  for (auto& [k, v] : seen) counts.push_back(v);
  EXPECT_LT(stats::chi_square_uniform(counts), stats::chi_square_bound(23));
  const double p = 1.0 / 24;
  const double sigma = std::sqrt(10000 * p * (1 - p));
  for (auto c : counts) EXPECT_NEAR(static_cast<double>(c), 10000 * p, 5 * sigma);
}

TEST(Tree, SegmentToArc) {
  const auto inst = Instance::one_cycle({3, 4, 1, 2});
  const auto s = PartitionNode::parse(4, 2, "1,2|3,4");
  EXPECT_TRUE(s.contains(inst));
  EXPECT_EQ(segment_to_arc(inst, s, {3, 4}).locations(), (std::vector<Location>{1, 2}));
  EXPECT_EQ(segment_to_arc(inst, s, {1, 2}).locations(), (std::vector<Location>{3, 4}));
  const auto leaf = PartitionNode::parse(4, 2, "3,4,1,2");
  EXPECT_EQ(segment_to_arc(inst, leaf, {3, 4, 1, 2}).locations(), (std::vector<Location>{1, 2, 3, 4}));
  EXPECT_THROW(segment_to_arc(Instance::one_cycle({1, 3, 2, 4}), s, {1, 2}), CycleError);
}

TEST(Tree, SubspaceMembershipAndInjectiveArcsAtEight) {
  const auto root = build_tree(8, 2);
  int nodes = 0;
  for (const auto& s1 : root.children()) {
    if (nodes++ % 97 != 0) continue;  // a spread of level-1 nodes
    for (const auto& s : {s1, s1.children().front()}) {
      std::uint64_t count = 0;
      s.for_each_instance([&](const Instance& inst) {
        ++count;
        EXPECT_TRUE(s.contains(inst));
        std::set<std::uint64_t> arcs;
        for (const auto& seg : s.segments()) arcs.insert(segment_to_arc(inst, s, seg).index);
        EXPECT_EQ(arcs.size(), s.segments().size());
      });
      EXPECT_EQ(count, s.subspace_size());
    }
  }
}
