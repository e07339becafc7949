#include "verifier/enumerate.hpp"

#include <algorithm>
#include <numeric>

namespace cyclemr::detail {

std::uint64_t lehmer_rank(const std::vector<PointId>& perm) {
  const std::size_t n = perm.size();
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

std::vector<Instance> all_one_cycle_instances(PointId n) {
  std::vector<Instance> out;
  std::vector<PointId> perm(n);
  std::iota(perm.begin(), perm.end(), PointId{1});
  out.reserve(factorial(n));
  do {
    out.push_back(Instance::one_cycle(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

void extend(PointId n, std::uint32_t len, std::vector<PointId>& cur, std::vector<char>& used,
            std::vector<std::vector<PointId>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (PointId id = 0; id <= n; ++id) {
    if (used[id]) continue;
    used[id] = 1;
    cur.push_back(id);
    extend(n, len, cur, used, out);
    cur.pop_back();
    used[id] = 0;
  }
}

}  // namespace

std::vector<std::vector<PointId>> all_id_sequences(PointId n, std::uint32_t min_len, std::uint32_t max_len) {
  std::vector<std::vector<PointId>> out;
  std::vector<PointId> cur;
  std::vector<char> used(n + 1, 0);
  for (std::uint32_t len = std::max(1u, min_len); len <= max_len && len <= n + 1; ++len) {
    extend(n, len, cur, used, out);
  }
  return out;
}

void instances_containing(PointId n, const std::vector<PointId>& h, std::vector<Placed>& out) {
  out.clear();
  const std::uint32_t C = n + 1;
  std::vector<char> in_h(C, 0);
  for (PointId id : h) in_h[id] = 1;
  std::vector<PointId> rest;
  for (PointId id = 0; id <= n; ++id) {
    if (!in_h[id]) rest.push_back(id);
  }
  std::vector<PointId> circle(C);
  std::vector<PointId> perm(n);
  do {
    std::copy(h.begin(), h.end(), circle.begin());
    std::copy(rest.begin(), rest.end(), circle.begin() + static_cast<std::ptrdiff_t>(h.size()));
    const auto pivot = static_cast<std::uint32_t>(std::find(circle.begin(), circle.end(), PointId{0}) - circle.begin());
    for (std::uint32_t k = 0; k < n; ++k) perm[k] = circle[(pivot + 1 + k) % C];
    out.push_back(Placed{lehmer_rank(perm), (C - pivot) % C});
  } while (std::next_permutation(rest.begin(), rest.end()));
}

}  // namespace cyclemr::detail
