#include "cyclemr/history.hpp"

#include <unordered_set>

#include "cyclemr/rng.hpp"

namespace cyclemr {

std::uint64_t leaf_digest(PointId id) noexcept { return hash_values(0x6c656166ULL, id); }

std::uint64_t merge_digest_begin(Round round, MachineIndex machine, std::size_t child_count) noexcept {
  return hash_values(0x6d657267ULL, round, machine, child_count);
}

std::uint64_t merge_digest_step(std::uint64_t state, std::uint64_t child) noexcept { return hash_combine(state, child); }

std::uint64_t merge_digest(Round round, MachineIndex machine, const std::vector<std::uint64_t>& children) noexcept {
  std::uint64_t h = merge_digest_begin(round, machine, children.size());
  for (auto c : children) h = merge_digest_step(h, c);
  return h;
}

std::uint64_t cut_digest(PointId first, std::uint32_t length) noexcept {
  return hash_values(0x637574ULL, first, length);
}

std::vector<PointId> history_leaves(const HistoryPtr& node) {
  std::vector<PointId> out;
  if (!node) return out;
  std::vector<const HistoryNode*> stack{node.get()};
  while (!stack.empty()) {
    const HistoryNode* cur = stack.back();
    stack.pop_back();
    if (cur->kind == HistoryNode::Kind::leaf) {
      out.push_back(cur->point);
      continue;
    }
    for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) stack.push_back(it->get());
  }
  return out;
}

std::size_t history_node_count(const HistoryPtr& node) {
  if (!node) return 0;
  std::unordered_set<const HistoryNode*> seen;
  std::vector<const HistoryNode*> stack{node.get()};
  while (!stack.empty()) {
    const HistoryNode* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    for (const auto& c : cur->children) stack.push_back(c.get());
  }
  return seen.size();
}

}  // namespace cyclemr
