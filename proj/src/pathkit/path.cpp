#include "cyclemr/path.hpp"

#include <algorithm>
#include <array>

namespace cyclemr {

namespace {

std::uint32_t circular_distance(std::uint32_t from, std::uint32_t to, std::uint32_t size) noexcept {
  return to >= from ? to - from : to + size - from;
}

void require_same_instance(const Path& a, const Path& b) {
  if (a.instance() != b.instance()) throw CycleError(Errc::mixed_instance, "paths from different instances");
}

// Builds the union of `members` (already known to form one run) as a single path.
Path fuse(std::span<const Path*> members, std::uint32_t offset, std::uint64_t span_length, MergeContext ctx) {
  const Path& first = *members.front();
  if (members.size() == 1) return first;
  const std::uint32_t size = first.cycle_size();
  const bool full = span_length >= size;
  const std::uint32_t start = full ? 0 : offset;
  const auto length = static_cast<std::uint32_t>(full ? size : span_length);
  const auto by_position = [&](const Path* a, const Path* b) {
    const auto ra = circular_distance(start, a->offset(), size);
    const auto rb = circular_distance(start, b->offset(), size);
    if (ra != rb) return ra < rb;
    if (a->size() != b->size()) return a->size() < b->size();
    return a->digest() < b->digest();
  };
  if (!std::is_sorted(members.begin(), members.end(), by_position)) {
    std::sort(members.begin(), members.end(), by_position);
  }
  std::uint64_t digest = merge_digest_begin(ctx.round, ctx.machine, members.size());
  bool keep_tree = true;
  for (const Path* m : members) {
    digest = merge_digest_step(digest, m->digest());
    keep_tree = keep_tree && m->history() != nullptr;
  }
  HistoryPtr tree;
  if (keep_tree) {
    auto node = std::make_shared<HistoryNode>();
    node->kind = HistoryNode::Kind::merge;
    node->round = ctx.round;
    node->machine = ctx.machine;
    node->digest = digest;
    for (const Path* m : members) node->children.push_back(m->history());
    tree = std::move(node);
  }
  return Path::from_arc(*first.instance(), first.cycle(), start, length, digest, std::move(tree));
}

HistoryPtr cut_tree(const Path& source, std::uint64_t digest) {
  if (!source.history()) return nullptr;
  auto node = std::make_shared<HistoryNode>();
  node->kind = HistoryNode::Kind::cut;
  node->digest = digest;
  return node;
}

Path carve(const Path& source, std::uint32_t offset, std::uint32_t length) {
  const Instance& inst = *source.instance();
  const PointId first = inst.at(inst.cycle(source.cycle()).begin + offset);
  const std::uint64_t digest = cut_digest(first, length);
  return Path::from_arc(inst, source.cycle(), offset, length, digest, cut_tree(source, digest));
}

}  // namespace

Path Path::point(const Instance& instance, PointId id, bool keep_tree) {
  const Location loc = instance.location_of(id);
  const std::uint32_t cyc = instance.cycle_of(loc);
  const std::uint64_t digest = leaf_digest(id);
  HistoryPtr tree;
  if (keep_tree) {
    auto node = std::make_shared<HistoryNode>();
    node->kind = HistoryNode::Kind::leaf;
    node->point = id;
    node->digest = digest;
    tree = std::move(node);
  }
  return from_arc(instance, cyc, loc - instance.cycle(cyc).begin, 1, digest, std::move(tree));
}

Path Path::run(const Instance& instance, PointId first, std::uint32_t length) {
  const Location loc = instance.location_of(first);
  const std::uint32_t cyc = instance.cycle_of(loc);
  const CycleSpan span = instance.cycle(cyc);
  if (length == 0 || length > span.size) throw CycleError(Errc::bad_size, "run length out of range");
  if (length == span.size) return from_arc(instance, cyc, 0, length, cut_digest(instance.at(span.begin), length), nullptr);
  return from_arc(instance, cyc, loc - span.begin, length, cut_digest(first, length), nullptr);
}

Path Path::from_ids(const Instance& instance, std::span<const PointId> ids) {
  if (ids.empty()) throw CycleError(Errc::no_common_path, "empty id list");
  for (auto id : ids) {
    if (id >= instance.point_count()) throw CycleError(Errc::no_common_path, "unknown id " + std::to_string(id));
  }
  const Location loc = instance.location_of(ids.front());
  const std::uint32_t cyc = instance.cycle_of(loc);
  const CycleSpan span = instance.cycle(cyc);
  if (ids.size() > span.size) throw CycleError(Errc::no_common_path, "path longer than its cycle");
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (instance.successor(ids[i - 1]) != ids[i]) {
      throw CycleError(Errc::no_common_path, "ids are not a clockwise run of the instance");
    }
  }
  const auto length = static_cast<std::uint32_t>(ids.size());
  const std::uint32_t offset = loc - span.begin;
  return from_arc(instance, cyc, offset, length, cut_digest(ids.front(), length), nullptr);
}

Path Path::from_arc(const Instance& instance, std::uint32_t cycle, std::uint32_t offset, std::uint32_t length,
                    std::uint64_t digest, HistoryPtr history) {
  const CycleSpan span = instance.cycle(cycle);
  if (length == 0 || length > span.size || offset >= span.size) {
    throw CycleError(Errc::bad_size, "arc out of range");
  }
  Path p;
  p.instance_ = &instance;
  p.cycle_ = cycle;
  p.cycle_begin_ = span.begin;
  p.cycle_size_ = span.size;
  p.offset_ = length == span.size ? 0 : offset;
  p.length_ = length;
  p.digest_ = digest;
  p.history_ = std::move(history);
  return p;
}

PointId Path::at(std::uint32_t i) const {
  std::uint32_t pos = offset_ + i;
  if (pos >= cycle_size_) pos -= cycle_size_;
  return instance_->order()[cycle_begin_ + pos];
}

std::vector<PointId> Path::points() const {
  const auto [head, tail] = point_runs();
  std::vector<PointId> out(head.begin(), head.end());
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::pair<std::span<const PointId>, std::span<const PointId>> Path::point_runs() const {
  const auto order = instance_->order().subspan(cycle_begin_, cycle_size_);
  const std::uint32_t head_len = std::min(length_, cycle_size_ - offset_);
  return {order.subspan(offset_, head_len), order.subspan(0, length_ - head_len)};
}

bool Path::contains(const Path& q) const {
  require_same_instance(*this, q);
  if (cycle_ != q.cycle_) return false;
  if (full_cycle()) return true;
  if (q.full_cycle()) return false;
  return circular_distance(offset_, q.offset_, cycle_size_) + q.length_ <= length_;
}

std::string Path::debug_string() const {
  std::string out = "[";
  for (std::uint32_t i = 0; i < length_; ++i) {
    if (i != 0) out.push_back(',');
    out += std::to_string(at(i));
  }
  out += "]@(" + std::to_string(start_location()) + "," + std::to_string(length_) + ")";
  return out;
}

bool intersects(const Path& a, const Path& b) {
  require_same_instance(a, b);
  if (a.cycle() != b.cycle()) return false;
  if (a.full_cycle() || b.full_cycle()) return true;
  const auto size = a.cycle_size();
  return circular_distance(a.offset(), b.offset(), size) <= a.size() ||
         circular_distance(b.offset(), a.offset(), size) <= b.size();
}

Path merge(const Path& a, const Path& b, MergeContext ctx) {
  if (a.same_path(b)) {
    require_same_instance(a, b);
    return a;
  }
  if (!intersects(a, b)) throw CycleError(Errc::not_intersecting, a.debug_string() + " / " + b.debug_string());
  const auto size = a.cycle_size();
  std::uint32_t offset = 0;
  std::uint64_t span = size;
  if (!a.full_cycle() && !b.full_cycle()) {
    const auto d = circular_distance(a.offset(), b.offset(), size);
    if (d <= a.size()) {
      offset = a.offset();
      span = std::max<std::uint64_t>(a.size(), std::uint64_t{d} + b.size());
    } else {
      offset = b.offset();
      span = std::max<std::uint64_t>(b.size(), std::uint64_t{circular_distance(b.offset(), a.offset(), size)} + a.size());
    }
  }
  std::array<const Path*, 2> pair{&a, &b};
  return fuse(pair, offset, span, ctx);
}

PathSet reduce_set(std::span<const Path> paths, MergeContext ctx) {
  const auto same = [](const Path& x, const Path& y) { return x.same_path(y); };
  std::vector<Path> copy;
  std::span<const Path> items = paths;
  if (!std::is_sorted(paths.begin(), paths.end(), ArcLess{}) ||
      std::adjacent_find(paths.begin(), paths.end(), same) != paths.end()) {
    copy.assign(paths.begin(), paths.end());
    std::sort(copy.begin(), copy.end(), ArcLess{});
    copy.erase(std::unique(copy.begin(), copy.end(), same), copy.end());
    items = copy;
  }
  for (std::size_t i = 1; i < items.size(); ++i) require_same_instance(items[0], items[i]);

  PathSet out;
  out.reserve(items.size());
  // A group is the item range [lo, hi) plus, for the wrapping group, the
  // head items [0, wrap) of the same cycle.
  struct Group {
    std::uint64_t start;
    std::uint64_t end;  // exclusive, unwrapped: may exceed the cycle size
    std::size_t lo;
    std::size_t hi;
  };
  std::vector<Group> groups;
  std::vector<const Path*> members;
  std::size_t lo = 0;
  while (lo < items.size()) {
    std::size_t hi = lo;
    while (hi < items.size() && items[hi].cycle() == items[lo].cycle()) ++hi;
    const std::uint64_t size = items[lo].cycle_size();
    const bool any_full = std::any_of(items.begin() + static_cast<std::ptrdiff_t>(lo),
                                      items.begin() + static_cast<std::ptrdiff_t>(hi),
                                      [](const Path& p) { return p.full_cycle(); });
    groups.clear();
    std::size_t head = 0;
    if (any_full) {
      groups.push_back(Group{0, size, lo, hi});
    } else {
      for (std::size_t i = lo; i < hi; ++i) {
        const Path& p = items[i];
        if (!groups.empty() && p.offset() <= groups.back().end) {
          groups.back().end = std::max<std::uint64_t>(groups.back().end, std::uint64_t{p.offset()} + p.size());
          groups.back().hi = i + 1;
        } else {
          groups.push_back(Group{p.offset(), std::uint64_t{p.offset()} + p.size(), i, i + 1});
        }
      }
      // The last run may wrap past the cycle end into the first runs.
      while (groups.size() - head > 1 && groups.back().end >= size + groups[head].start) {
        groups.back().end = std::max(groups.back().end, groups[head].end + size);
        ++head;
      }
    }
    const std::size_t wrap_hi = head > 0 ? groups[head - 1].hi : lo;
    for (std::size_t g = head; g < groups.size(); ++g) {
      const Group& grp = groups[g];
      const bool wraps = g + 1 == groups.size() && head > 0;
      if (grp.hi - grp.lo == 1 && !wraps) {
        out.push_back(items[grp.lo]);
        continue;
      }
      members.clear();
      for (std::size_t i = grp.lo; i < grp.hi; ++i) members.push_back(&items[i]);
      if (wraps) {
        for (std::size_t i = lo; i < wrap_hi; ++i) members.push_back(&items[i]);
      }
      out.push_back(fuse(members, static_cast<std::uint32_t>(grp.start % size), grp.end - grp.start, ctx));
    }
    lo = hi;
  }
  if (!std::is_sorted(out.begin(), out.end(), ArcLess{})) std::sort(out.begin(), out.end(), ArcLess{});
  return out;
}

std::optional<Path> trim(const Path& p, std::uint32_t t) {
  if (t == 0) return p;
  if (p.size() <= 2 * std::uint64_t{t}) return std::nullopt;
  return carve(p, (p.offset() + t) % p.cycle_size(), p.size() - 2 * t);
}

std::optional<Path> common(const Path& a, const Path& b) {
  require_same_instance(a, b);
  if (a.cycle() != b.cycle()) return std::nullopt;
  if (a.full_cycle()) return b;
  if (b.full_cycle()) return a;
  const auto size = a.cycle_size();
  std::uint32_t best_offset = 0;
  std::uint32_t best_len = 0;
  const auto d = circular_distance(a.offset(), b.offset(), size);
  if (d < a.size()) {
    best_offset = b.offset();
    best_len = std::min(a.size() - d, b.size());
  }
  const auto d2 = circular_distance(b.offset(), a.offset(), size);
  if (d2 < b.size()) {
    const std::uint32_t len = std::min(b.size() - d2, a.size());
    if (len > best_len) {
      best_offset = a.offset();
      best_len = len;
    }
  }
  if (best_len == 0) return std::nullopt;
  if (best_offset == a.offset() && best_len == a.size()) return a;
  if (best_offset == b.offset() && best_len == b.size()) return b;
  return carve(a, best_offset, best_len);
}

PathSet restrict_to(std::span<const Path> t, const Path& p) {
  PathSet out;
  for (const auto& q : t) {
    if (p.contains(q)) out.push_back(q);
  }
  return out;
}

PathSet meet(std::span<const Path> t, const Path& p) {
  PathSet out;
  for (const auto& q : t) {
    if (auto c = common(q, p)) out.push_back(std::move(*c));
  }
  std::sort(out.begin(), out.end(), ArcLess{});
  out.erase(std::unique(out.begin(), out.end(), [](const Path& x, const Path& y) { return x.same_path(y); }),
            out.end());
  return out;
}

}  // namespace cyclemr
