#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cyclemr/common.hpp"
#include "cyclemr/instance.hpp"

namespace cyclemr {

using Segment = std::vector<PointId>;

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000;

// A node of the permutation tree: a level-r partition of [n] into n/rho^r
// ordered segments of length rho^r. Segments are kept sorted by their first
// ID so that equal partitions compare equal. The parent is not stored: it is
// recovered by cutting every segment into rho^(r-1)-long pieces.
class PartitionNode {
 public:
  static PartitionNode root(PointId n, std::uint32_t rho);
  // Parse `1,2|3,4` (segments separated by `|`), inferring the level.
  static PartitionNode parse(PointId n, std::uint32_t rho, const std::string& text);
  static PartitionNode from_segments(PointId n, std::uint32_t rho, std::vector<Segment> segments);

  PointId n() const noexcept { return n_; }
  std::uint32_t rho() const noexcept { return rho_; }
  unsigned level() const noexcept { return level_; }
  unsigned depth() const noexcept { return depth_; }  // log_rho n
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::uint64_t segment_length() const noexcept { return segments_.front().size(); }
  bool is_leaf() const noexcept { return level_ == depth_; }
  bool is_root() const noexcept { return level_ == 0; }

  // (n/rho^(r-1))! / (n/rho^r)! where r is the child level.
  std::uint64_t child_count() const;
  // |U_r(S)| = (n/rho^r)!
  std::uint64_t subspace_size() const;

  // Every arrangement of this node's segments into ordered groups of rho.
  std::vector<PartitionNode> children() const;
  PartitionNode parent() const;
  // Proper ancestors from the root down, excluding this node.
  std::vector<PartitionNode> ancestors() const;

  // I is in U_r(S) iff every segment sits, in order, on a level-r arc.
  bool contains(const Instance& instance) const;
  // Uniform draw from U_r(S) by refining through uniformly chosen children.
  Instance sample(std::uint64_t seed) const;
  // Calls `visit` once per instance in U_r(S), in tree order.
  void for_each_instance(const std::function<void(const Instance&)>& visit) const;
  // Leaf node -> the one-cycle instance it spells out.
  Instance to_instance() const;

  std::string to_string() const;
  friend bool operator==(const PartitionNode&, const PartitionNode&) = default;

 private:
  PartitionNode(PointId n, std::uint32_t rho, unsigned level, unsigned depth, std::vector<Segment> segments);
  void canonicalize();

  PointId n_ = 0;
  std::uint32_t rho_ = 2;
  unsigned level_ = 0;
  unsigned depth_ = 0;
  std::vector<Segment> segments_;
};

// Validates that n is a power of rho and returns the root.
PartitionNode build_tree(PointId n, std::uint32_t rho);

// Node counts per level computed arithmetically: n!/(n/rho^r)!.
std::vector<std::uint64_t> level_counts(PointId n, std::uint32_t rho);

struct TreeEnumeration {
  std::vector<std::uint64_t> counts;  // nodes visited per level
  std::vector<Segment> leaves;        // leaf permutations, in visit order
};

// Walks the whole tree. Throws CapExceeded up front when the total node count
// would exceed `node_cap`.
TreeEnumeration enumerate_tree(PointId n, std::uint32_t rho, std::uint64_t node_cap = kDefaultNodeCap,
                               bool keep_leaves = true);

// The unique arc that hosts segment `s` of `partition` under `instance`.
Arc segment_to_arc(const Instance& instance, const PartitionNode& partition, const Segment& s);

}  // namespace cyclemr
