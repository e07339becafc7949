#include "cyclemr/instance.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "cyclemr/rng.hpp"

namespace cyclemr {

const char* topology_name(Topology t) {
  return t == Topology::one_cycle ? "one-cycle" : "two-cycle";
}

Instance::Instance(std::vector<PointId> order, Location split)
    : order_(std::move(order)), location_(order_.size()), split_(split) {
  const auto count = order_.size();
  if (count == 0) throw CycleError(Errc::bad_size, "instance needs at least the pivot");
  if (order_[0] != 0) throw CycleError(Errc::bad_size, "pivot 0 must sit at q_0");
  std::vector<bool> seen(count, false);
  for (Location loc = 0; loc < count; ++loc) {
    const PointId id = order_[loc];
    if (id >= count || seen[id]) {
      throw CycleError(Errc::bad_size, "labeling is not a bijection onto 0..n");
    }
    seen[id] = true;
    location_[id] = loc;
  }
  if (split_ >= count && split_ != 0) throw CycleError(Errc::bad_size, "second cycle is empty");
}

Instance Instance::one_cycle(std::vector<PointId> perm) {
  std::vector<PointId> order;
  order.reserve(perm.size() + 1);
  order.push_back(0);
  order.insert(order.end(), perm.begin(), perm.end());
  return Instance(std::move(order), 0);
}

Instance Instance::two_cycle(std::vector<PointId> first, std::vector<PointId> second) {
  if (second.empty()) throw CycleError(Errc::bad_size, "second cycle is empty");
  std::vector<PointId> order;
  order.reserve(first.size() + second.size() + 1);
  order.push_back(0);
  order.insert(order.end(), first.begin(), first.end());
  const auto split = static_cast<Location>(order.size());
  order.insert(order.end(), second.begin(), second.end());
  return Instance(std::move(order), split);
}

CycleSpan Instance::cycle(std::size_t index) const {
  const auto count = point_count();
  if (split_ == 0) {
    if (index != 0) throw CycleError(Errc::index_out_of_range, "one-cycle instance has one cycle");
    return {0, count};
  }
  if (index == 0) return {0, split_};
  if (index == 1) return {split_, count - split_};
  throw CycleError(Errc::index_out_of_range, "two-cycle instance has two cycles");
}

std::uint32_t Instance::largest_cycle() const noexcept {
  if (split_ == 0) return point_count();
  return std::max<std::uint32_t>(split_, point_count() - split_);
}

Location Instance::location_of(PointId id) const {
  if (id >= point_count()) throw CycleError(Errc::unknown_id, "point " + std::to_string(id));
  return location_[id];
}

PointId Instance::successor(PointId id) const {
  const Location loc = location_of(id);
  const CycleSpan c = cycle(cycle_of(loc));
  const Location next = loc + 1 == c.begin + c.size ? c.begin : loc + 1;
  return order_[next];
}

namespace {

void append_ids(std::string& out, std::span<const PointId> ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += std::to_string(ids[i]);
  }
}

std::vector<PointId> parse_ids(std::string_view text) {
  std::vector<PointId> ids;
  if (text.empty()) return ids;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    PointId value = 0;
    const auto token = text.substr(pos, comma - pos);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw CycleError(Errc::parse_error, "bad point id '" + std::string(token) + "'");
    }
    ids.push_back(value);
    pos = comma + 1;
  }
  return ids;
}

}  // namespace

std::string Instance::serialize() const {
  std::string out = topology_name(topology());
  out += ';';
  out += std::to_string(n());
  out += ';';
  if (split_ == 0) {
    append_ids(out, permutation());
  } else {
    append_ids(out, std::span(order_).subspan(1, split_ - 1));
    out += '|';
    append_ids(out, std::span(order_).subspan(split_));
  }
  return out;
}

Instance Instance::parse(std::string_view line) {
  const auto a = line.find(';');
  const auto b = a == std::string_view::npos ? a : line.find(';', a + 1);
  if (b == std::string_view::npos) throw CycleError(Errc::parse_error, "expected topology;n;perm");
  const auto topo = line.substr(0, a);
  const auto n_text = line.substr(a + 1, b - a - 1);
  const auto body = line.substr(b + 1);
  PointId n = 0;
  const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc() || ptr != n_text.data() + n_text.size()) {
    throw CycleError(Errc::parse_error, "bad n");
  }
  Instance result = [&] {
    if (topo == "one-cycle") {
      if (body.find('|') != std::string_view::npos) throw CycleError(Errc::parse_error, "'|' in one-cycle");
      return one_cycle(parse_ids(body));
    }
    if (topo == "two-cycle") {
      const auto bar = body.find('|');
      if (bar == std::string_view::npos) throw CycleError(Errc::parse_error, "two-cycle needs '|'");
      return two_cycle(parse_ids(body.substr(0, bar)), parse_ids(body.substr(bar + 1)));
    }
    throw CycleError(Errc::parse_error, "unknown topology '" + std::string(topo) + "'");
  }();
  if (result.n() != n) throw CycleError(Errc::parse_error, "n does not match the permutation");
  return result;
}

Instance random_one_cycle(PointId n, std::uint64_t seed) {
  std::vector<PointId> perm(n);
  std::iota(perm.begin(), perm.end(), PointId{1});
  Rng rng(hash_values(seed, 0x6f6e65ULL));
  rng.shuffle(std::span(perm));
  return Instance::one_cycle(std::move(perm));
}

Instance two_cycle_instance(PointId n, std::uint64_t seed, bool strict) {
  const std::uint32_t points = n + 1;
  if (points < 2) throw CycleError(Errc::bad_size, "two cycles need at least two points");
  if (strict && points % 2 != 0) {
    throw CycleError(Errc::bad_size, "n+1 = " + std::to_string(points) + " is odd; halves cannot be equal");
  }
  std::vector<PointId> ids(points);
  std::iota(ids.begin(), ids.end(), PointId{0});
  Rng rng(hash_values(seed, 0x74776fULL));
  rng.shuffle(std::span(ids));
  // ids[0..half) is the chosen half, ids[half..) the rest; each block's order
  // is a uniform linear order and hence a uniform circular order.
  const std::uint32_t half = (points + 1) / 2;
  auto chosen = std::span(ids).subspan(0, half);
  auto rest = std::span(ids).subspan(half);
  const bool pivot_in_chosen = std::find(chosen.begin(), chosen.end(), PointId{0}) != chosen.end();
  auto pivot_side = pivot_in_chosen ? chosen : rest;
  auto other_side = pivot_in_chosen ? rest : chosen;
  std::rotate(pivot_side.begin(), std::find(pivot_side.begin(), pivot_side.end(), PointId{0}),
              pivot_side.end());
  return Instance::two_cycle(std::vector<PointId>(pivot_side.begin() + 1, pivot_side.end()),
                             std::vector<PointId>(other_side.begin(), other_side.end()));
}

std::vector<Location> Arc::locations() const {
  std::vector<Location> locs(length);
  std::iota(locs.begin(), locs.end(), first);
  return locs;
}

Arc arc(PointId n, std::uint32_t rho, unsigned level, std::uint64_t k) {
  const std::uint64_t len = ipow(rho, level);
  if (len == 0 || len > n || n % len != 0) {
    throw CycleError(Errc::index_out_of_range, "level " + std::to_string(level) + " does not tile n");
  }
  if (k < 1 || k > n / len) {
    throw CycleError(Errc::index_out_of_range, "arc index " + std::to_string(k));
  }
  return Arc{level, k, static_cast<Location>(1 + (k - 1) * len), len};
}

}  // namespace cyclemr
