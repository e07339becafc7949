#include "cyclemr/tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cyclemr/rng.hpp"

namespace cyclemr {

namespace {

void require_tree_shape(PointId n, std::uint32_t rho) {
  if (rho < 2) throw CycleError(Errc::bad_size, "rho must be at least 2");
  if (!is_power_of(n, rho)) {
    throw CycleError(Errc::bad_size, "n = " + std::to_string(n) + " is not a power of rho = " + std::to_string(rho));
  }
}

Segment concat(const std::vector<Segment>& segs, std::span<const std::size_t> picks) {
  Segment out;
  for (auto i : picks) out.insert(out.end(), segs[i].begin(), segs[i].end());
  return out;
}

}  // namespace

PartitionNode::PartitionNode(PointId n, std::uint32_t rho, unsigned level, unsigned depth,
                             std::vector<Segment> segments)
    : n_(n), rho_(rho), level_(level), depth_(depth), segments_(std::move(segments)) {
  canonicalize();
}

void PartitionNode::canonicalize() {
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& a, const Segment& b) { return a.front() < b.front(); });
}

PartitionNode PartitionNode::root(PointId n, std::uint32_t rho) {
  require_tree_shape(n, rho);
  std::vector<Segment> segs;
  segs.reserve(n);
  for (PointId id = 1; id <= n; ++id) segs.push_back({id});
  return PartitionNode(n, rho, 0, ilog(n, rho), std::move(segs));
}

PartitionNode PartitionNode::from_segments(PointId n, std::uint32_t rho, std::vector<Segment> segments) {
  require_tree_shape(n, rho);
  if (segments.empty()) throw CycleError(Errc::bad_size, "partition has no segments");
  const std::size_t len = segments.front().size();
  if (!is_power_of(len, rho) && len != 1) throw CycleError(Errc::bad_size, "segment length is not a power of rho");
  std::vector<bool> seen(n + 1, false);
  std::size_t total = 0;
  for (const auto& s : segments) {
    if (s.size() != len) throw CycleError(Errc::bad_size, "segments differ in length");
    for (auto id : s) {
      if (id == 0 || id > n || seen[id]) throw CycleError(Errc::bad_size, "segments do not partition [n]");
      seen[id] = true;
      ++total;
    }
  }
  if (total != n) throw CycleError(Errc::bad_size, "segments do not cover [n]");
  return PartitionNode(n, rho, ilog(len, rho), ilog(n, rho), std::move(segments));
}

PartitionNode PartitionNode::parse(PointId n, std::uint32_t rho, const std::string& text) {
  std::vector<Segment> segs;
  std::stringstream outer(text);
  std::string chunk;
  while (std::getline(outer, chunk, '|')) {
    Segment s;
    std::stringstream inner(chunk);
    std::string tok;
    while (std::getline(inner, tok, ',')) {
      try {
        s.push_back(static_cast<PointId>(std::stoul(tok)));
      } catch (const std::exception&) {
        throw CycleError(Errc::parse_error, "bad segment entry '" + tok + "'");
      }
    }
    segs.push_back(std::move(s));
  }
  return from_segments(n, rho, std::move(segs));
}

std::uint64_t PartitionNode::child_count() const {
  if (is_leaf()) return 0;
  const std::uint64_t k = segments_.size();
  return falling_factorial_ratio(k, k / rho_);
}

std::uint64_t PartitionNode::subspace_size() const { return factorial(segments_.size()); }

std::vector<PartitionNode> PartitionNode::children() const {
  if (is_leaf()) throw CycleError(Errc::leaf_node, "leaf partition has no children");
  const std::size_t k = segments_.size();
  std::vector<PartitionNode> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(child_count(), 1u << 20)));
  std::vector<bool> used(k, false);
  std::vector<std::size_t> order;  // chosen segment indices, group after group
  order.reserve(k);

  // Groups are emitted in order of their smallest unused segment index, which
  // makes every unordered set of groups appear exactly once.
  auto recurse = [&](auto&& self) -> void {
    if (order.size() == k) {
      std::vector<Segment> groups;
      groups.reserve(k / rho_);
      for (std::size_t g = 0; g < k; g += rho_) {
        groups.push_back(concat(segments_, std::span(order).subspan(g, rho_)));
      }
      out.push_back(PartitionNode(n_, rho_, level_ + 1, depth_, std::move(groups)));
      return;
    }
    const auto lead = static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
    used[lead] = true;
    std::vector<std::size_t> others;
    auto fill = [&](auto&& fill_self) -> void {
      if (others.size() + 1 == rho_) {
        for (std::size_t pos = 0; pos < rho_; ++pos) {
          const auto base = order.size();
          order.insert(order.end(), others.begin(), others.end());
          order.insert(order.begin() + static_cast<std::ptrdiff_t>(base + pos), lead);
          self(self);
          order.resize(base);
        }
        return;
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (used[j]) continue;
        used[j] = true;
        others.push_back(j);
        fill_self(fill_self);
        others.pop_back();
        used[j] = false;
      }
    };
    fill(fill);
    used[lead] = false;
  };
  recurse(recurse);
  return out;
}

PartitionNode PartitionNode::parent() const {
  if (is_root()) throw CycleError(Errc::index_out_of_range, "root has no parent");
  const std::size_t piece = segments_.front().size() / rho_;
  std::vector<Segment> segs;
  for (const auto& s : segments_) {
    for (std::size_t i = 0; i < s.size(); i += piece) {
      segs.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(i),
                        s.begin() + static_cast<std::ptrdiff_t>(i + piece));
    }
  }
  return PartitionNode(n_, rho_, level_ - 1, depth_, std::move(segs));
}

std::vector<PartitionNode> PartitionNode::ancestors() const {
  std::vector<PartitionNode> chain;
  PartitionNode cur = *this;
  while (!cur.is_root()) {
    cur = cur.parent();
    chain.push_back(cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

bool PartitionNode::contains(const Instance& instance) const {
  if (instance.topology() != Topology::one_cycle || instance.n() != n_) return false;
  const std::size_t len = segments_.front().size();
  for (const auto& s : segments_) {
    const Location first = instance.location_of(s.front());
    if (first == 0 || (first - 1) % len != 0) return false;
    for (std::size_t j = 1; j < len; ++j) {
      if (instance.at(first + static_cast<Location>(j)) != s[j]) return false;
    }
  }
  return true;
}

Instance PartitionNode::sample(std::uint64_t seed) const {
  Rng rng(hash_values(seed, 0x73616d70ULL));
  std::vector<Segment> segs = segments_;
  for (unsigned lvl = level_; lvl < depth_; ++lvl) {
    rng.shuffle(std::span(segs));
    std::vector<Segment> next;
    next.reserve(segs.size() / rho_);
    for (std::size_t g = 0; g < segs.size(); g += rho_) {
      Segment merged;
      for (std::size_t j = 0; j < rho_; ++j) merged.insert(merged.end(), segs[g + j].begin(), segs[g + j].end());
      next.push_back(std::move(merged));
    }
    segs = std::move(next);
  }
  return Instance::one_cycle(std::move(segs.front()));
}

void PartitionNode::for_each_instance(const std::function<void(const Instance&)>& visit) const {
  // Each ordering of the segments is exactly one leaf below this node.
  std::vector<std::size_t> idx(segments_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  do {
    visit(Instance::one_cycle(concat(segments_, idx)));
  } while (std::next_permutation(idx.begin(), idx.end()));
}

Instance PartitionNode::to_instance() const {
  if (!is_leaf()) throw CycleError(Errc::bad_size, "only leaves are instances");
  return Instance::one_cycle(segments_.front());
}

std::string PartitionNode::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i != 0) out.push_back('|');
    for (std::size_t j = 0; j < segments_[i].size(); ++j) {
      if (j != 0) out.push_back(',');
      out += std::to_string(segments_[i][j]);
    }
  }
  return out;
}

PartitionNode build_tree(PointId n, std::uint32_t rho) { return PartitionNode::root(n, rho); }

std::vector<std::uint64_t> level_counts(PointId n, std::uint32_t rho) {
  require_tree_shape(n, rho);
  const unsigned depth = ilog(n, rho);
  std::vector<std::uint64_t> counts;
  for (unsigned r = 0; r <= depth; ++r) counts.push_back(falling_factorial_ratio(n, n / ipow(rho, r)));
  return counts;
}

TreeEnumeration enumerate_tree(PointId n, std::uint32_t rho, std::uint64_t node_cap, bool keep_leaves) {
  const auto expected = level_counts(n, rho);
  std::uint64_t total = 0;
  for (auto c : expected) total = total + c < total ? UINT64_MAX : total + c;
  if (total > node_cap) {
    throw CycleError(Errc::cap_exceeded, "tree has " + std::to_string(total) + " nodes, cap is " +
                                             std::to_string(node_cap));
  }
  TreeEnumeration result;
  result.counts.assign(expected.size(), 0);
  auto walk = [&](auto&& self, const PartitionNode& node) -> void {
    ++result.counts[node.level()];
    if (node.is_leaf()) {
      if (keep_leaves) result.leaves.push_back(node.segments().front());
      return;
    }
    for (const auto& child : node.children()) self(self, child);
  };
  walk(walk, PartitionNode::root(n, rho));
  return result;
}

Arc segment_to_arc(const Instance& instance, const PartitionNode& partition, const Segment& s) {
  const auto& segs = partition.segments();
  if (std::find(segs.begin(), segs.end(), s) == segs.end()) {
    throw CycleError(Errc::not_in_subspace, "segment is not part of the partition");
  }
  if (!partition.contains(instance)) {
    throw CycleError(Errc::not_in_subspace, "instance is not below partition " + partition.to_string());
  }
  const Location first = instance.location_of(s.front());
  return arc(partition.n(), partition.rho(), partition.level(), (first - 1) / s.size() + 1);
}

}  // namespace cyclemr
