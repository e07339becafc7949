#include "cyclemr/common.hpp"

#include <limits>

namespace cyclemr {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::bad_size: return "BadSize";
    case Errc::unknown_id: return "UnknownID";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::leaf_node: return "LeafNode";
    case Errc::not_in_subspace: return "NotInSubspace";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::mixed_instance: return "MixedInstance";
    case Errc::not_intersecting: return "NotIntersecting";
    case Errc::capacity_infeasible: return "CapacityInfeasible";
    case Errc::no_common_path: return "NoCommonPath";
    case Errc::underdetermined: return "Underdetermined";
    case Errc::invalid_route: return "InvalidRoute";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

namespace {
constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

std::uint64_t factorial(std::uint64_t k) { return falling_factorial_ratio(k, 0); }

std::uint64_t falling_factorial_ratio(std::uint64_t k, std::uint64_t j) {
  std::uint64_t r = 1;
  for (std::uint64_t i = j + 1; i <= k; ++i) r = saturating_mul(r, i);
  return r;
}

bool is_power_of(std::uint64_t n, std::uint64_t base) {
  if (n == 0 || base < 2) return false;
  while (n % base == 0) n /= base;
  return n == 1;
}

unsigned ilog(std::uint64_t n, std::uint64_t base) {
  unsigned r = 0;
  while (n >= base) {
    n /= base;
    ++r;
  }
  return r;
}

}  // namespace cyclemr
