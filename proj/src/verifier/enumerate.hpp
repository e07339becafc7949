#pragma once

#include <cstdint>
#include <vector>

#include "cyclemr/instance.hpp"

namespace cyclemr::detail {

// Rank of a permutation of 1..n in lexicographic order.
std::uint64_t lehmer_rank(const std::vector<PointId>& perm);

// All one-cycle instances of size n, indexed by lehmer_rank of their permutation.
std::vector<Instance> all_one_cycle_instances(PointId n);

// Every sequence of distinct IDs from 0..n with length in [min_len, max_len], lexicographic per length.
std::vector<std::vector<PointId>> all_id_sequences(PointId n, std::uint32_t min_len, std::uint32_t max_len);

struct Placed {
  std::uint64_t index;       // instance rank
  std::uint32_t h_location;  // location of h.front()
};

// The one-cycle instances in which `h` is a clockwise run: h as a block,
// every order of the remaining points after it.
void instances_containing(PointId n, const std::vector<PointId>& h, std::vector<Placed>& out);

}  // namespace cyclemr::detail
