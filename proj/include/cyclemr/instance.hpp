#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cyclemr/common.hpp"

namespace cyclemr {

enum class Topology { one_cycle, two_cycle };

const char* topology_name(Topology t);

// A contiguous block of locations forming one cycle.
struct CycleSpan {
  Location begin = 0;
  std::uint32_t size = 0;
};

// A labeling of the n+1 points 0..n onto the locations q_0..q_n. Point 0 is
// the pivot and always sits at q_0. One-cycle instances use a single circular
// order over all locations; two-cycle instances split the locations into
// [0, split) and [split, n], each closed into its own circle.
class Instance {
 public:
  // perm lists the IDs placed on q_1..q_n in order; it must be a permutation of 1..n.
  static Instance one_cycle(std::vector<PointId> perm);
  // first lists the IDs on q_1..q_{k} (the cycle through the pivot), second
  // the IDs on q_{k+1}..q_n. Together they must be a permutation of 1..n.
  static Instance two_cycle(std::vector<PointId> first, std::vector<PointId> second);

  // `topology;n;perm`, with `|` marking the cycle boundary on two-cycle instances.
  static Instance parse(std::string_view line);
  std::string serialize() const;

  PointId n() const noexcept { return static_cast<PointId>(order_.size() - 1); }
  std::uint32_t point_count() const noexcept { return static_cast<std::uint32_t>(order_.size()); }
  Topology topology() const noexcept { return split_ == 0 ? Topology::one_cycle : Topology::two_cycle; }

  std::size_t cycle_count() const noexcept { return split_ == 0 ? 1 : 2; }
  CycleSpan cycle(std::size_t index) const;
  std::uint32_t cycle_of(Location loc) const noexcept { return (split_ != 0 && loc >= split_) ? 1 : 0; }
  std::uint32_t largest_cycle() const noexcept;

  PointId at(Location loc) const { return order_.at(loc); }
  Location location_of(PointId id) const;
  // Clockwise neighbour of `id` on its own cycle.
  PointId successor(PointId id) const;

  // IDs indexed by location.
  std::span<const PointId> order() const noexcept { return order_; }
  // IDs on q_1..q_n, i.e. the permutation of [n] the instance corresponds to.
  std::span<const PointId> permutation() const noexcept { return std::span(order_).subspan(1); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.order_ == b.order_ && a.split_ == b.split_;
  }

 private:
  Instance(std::vector<PointId> order, Location split);

  std::vector<PointId> order_;
  std::vector<Location> location_;
  Location split_ = 0;  // 0 for one-cycle
};

// Uniform random one-cycle labeling with the pivot fixed.
Instance random_one_cycle(PointId n, std::uint64_t seed);

// Uniform random two-cycle labeling: a uniformly chosen half of size
// ceil((n+1)/2) and independent uniform circular orders on both halves.
// With `strict`, n+1 must be even so the halves are equal (BadSize otherwise).
Instance two_cycle_instance(PointId n, std::uint64_t seed, bool strict = true);

// Level-r arc k (1-based): rho^r consecutive locations starting at q_{1+(k-1)rho^r}.
struct Arc {
  unsigned level = 0;
  std::uint64_t index = 0;
  Location first = 1;
  std::uint64_t length = 1;

  std::vector<Location> locations() const;
  friend bool operator==(const Arc&, const Arc&) = default;
};

Arc arc(PointId n, std::uint32_t rho, unsigned level, std::uint64_t k);

}  // namespace cyclemr
