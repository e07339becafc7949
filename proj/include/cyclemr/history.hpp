#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cyclemr/common.hpp"

namespace cyclemr {

// Merge provenance of a path. Leaves are initial single points; an internal
// node records one reduce step that fused its children on (round, machine).
// Nodes are immutable and shared between the paths that descend from them.
struct HistoryNode {
  enum class Kind { leaf, merge, cut };

  Kind kind = Kind::leaf;
  PointId point = 0;  // leaf only
  Round round = 0;
  MachineIndex machine = 0;
  std::uint64_t digest = 0;
  std::vector<std::shared_ptr<const HistoryNode>> children;  // in path order
};

using HistoryPtr = std::shared_ptr<const HistoryNode>;

std::uint64_t leaf_digest(PointId id) noexcept;
std::uint64_t merge_digest(Round round, MachineIndex machine, const std::vector<std::uint64_t>& children) noexcept;
// Incremental form of merge_digest: begin, then one step per child in order.
std::uint64_t merge_digest_begin(Round round, MachineIndex machine, std::size_t child_count) noexcept;
std::uint64_t merge_digest_step(std::uint64_t state, std::uint64_t child) noexcept;
// Digest for sub-paths carved out by trim/common, which have no merge story.
std::uint64_t cut_digest(PointId first, std::uint32_t length) noexcept;

// Point IDs at the leaves, in left-to-right order (repeats when merged paths overlapped).
std::vector<PointId> history_leaves(const HistoryPtr& node);
std::size_t history_node_count(const HistoryPtr& node);

}  // namespace cyclemr
