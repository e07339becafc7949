#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclemr/history.hpp"
#include "cyclemr/instance.hpp"

namespace cyclemr {

// Where a reduce step happens; stamped onto the history of merged paths.
struct MergeContext {
  Round round = 0;
  MachineIndex machine = 0;
};

// A clockwise run of points on one cycle of an instance. Internally an arc
// (cycle, offset, length); the IDs are read through the instance. A path that
// covers its whole cycle is the distinguished full-cycle path with offset 0.
class Path {
 public:
  Path() = default;

  // Single point, history = leaf. Without `keep_tree` only the digest is kept.
  static Path point(const Instance& instance, PointId id, bool keep_tree = true);
  // The run of `length` points starting at `first`; throws UnknownID / BadSize.
  static Path run(const Instance& instance, PointId first, std::uint32_t length);
  // The path whose IDs are exactly `ids`, or NoCommonPath if they are not a clockwise run.
  static Path from_ids(const Instance& instance, std::span<const PointId> ids);
  static Path from_arc(const Instance& instance, std::uint32_t cycle, std::uint32_t offset, std::uint32_t length,
                       std::uint64_t digest, HistoryPtr history);

  const Instance* instance() const noexcept { return instance_; }
  std::uint32_t size() const noexcept { return length_; }
  PointId front() const { return at(0); }
  PointId back() const { return at(length_ - 1); }
  PointId at(std::uint32_t i) const;
  std::vector<PointId> points() const;
  // The IDs as at most two contiguous runs of the instance's location order.
  std::pair<std::span<const PointId>, std::span<const PointId>> point_runs() const;

  std::uint32_t cycle() const noexcept { return cycle_; }
  std::uint32_t offset() const noexcept { return offset_; }
  std::uint32_t cycle_size() const noexcept { return cycle_size_; }
  Location start_location() const noexcept { return cycle_begin_ + offset_; }
  bool full_cycle() const noexcept { return length_ == cycle_size_; }

  std::uint64_t digest() const noexcept { return digest_; }
  const HistoryPtr& history() const noexcept { return history_; }

  // Q is a subpath of this path.
  bool contains(const Path& q) const;
  bool same_arc(const Path& q) const noexcept {
    return cycle_ == q.cycle_ && offset_ == q.offset_ && length_ == q.length_;
  }
  // Same points and same history (instance identity not compared).
  bool same_path(const Path& q) const noexcept { return same_arc(q) && digest_ == q.digest_; }

  // `[id1,id2,...]@(start,len)` with start the absolute location of the first point.
  std::string debug_string() const;

  // Canonical order inside a path set: by arc, then digest.
  friend bool arc_less(const Path& a, const Path& b) noexcept {
    if (a.cycle_ != b.cycle_) return a.cycle_ < b.cycle_;
    if (a.offset_ != b.offset_) return a.offset_ < b.offset_;
    if (a.length_ != b.length_) return a.length_ < b.length_;
    return a.digest_ < b.digest_;
  }

 private:
  const Instance* instance_ = nullptr;
  std::uint32_t cycle_ = 0;
  Location cycle_begin_ = 0;
  std::uint32_t cycle_size_ = 0;
  std::uint32_t offset_ = 0;
  std::uint32_t length_ = 0;
  std::uint64_t digest_ = 0;
  HistoryPtr history_;
};

bool arc_less(const Path& a, const Path& b) noexcept;

// arc_less as a function object, so sorts can inline it.
struct ArcLess {
  bool operator()(const Path& a, const Path& b) const noexcept { return arc_less(a, b); }
};

using PathSet = std::vector<Path>;

// The union of the two point sets is itself a run (overlap or touching).
bool intersects(const Path& a, const Path& b);
// Union path; history gets a merge node over both parents. P + P = P.
Path merge(const Path& a, const Path& b, MergeContext ctx);
// Collapses every connected component of the intersects-graph into its union.
// Exact duplicates are dropped first. The result is sorted and does not
// depend on the input order.
PathSet reduce_set(std::span<const Path> paths, MergeContext ctx);
// Remove t points from both ends; empty when |P| <= 2t.
std::optional<Path> trim(const Path& p, std::uint32_t t);
// Longest common subpath; empty when no point is shared.
std::optional<Path> common(const Path& a, const Path& b);
// T | P: members of T that are subpaths of P.
PathSet restrict_to(std::span<const Path> t, const Path& p);
// T ∧ P: common(., P) over T, empties dropped.
PathSet meet(std::span<const Path> t, const Path& p);

}  // namespace cyclemr
