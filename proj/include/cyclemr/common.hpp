#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cyclemr {

using PointId = std::uint32_t;
using Location = std::uint32_t;
using MachineIndex = std::uint32_t;
using Round = std::uint32_t;

enum class Errc {
  bad_size,
  unknown_id,
  index_out_of_range,
  leaf_node,
  not_in_subspace,
  cap_exceeded,
  mixed_instance,
  not_intersecting,
  capacity_infeasible,
  no_common_path,
  underdetermined,
  invalid_route,
  parse_error,
};

const char* errc_name(Errc code);

class CycleError : public std::runtime_error {
 public:
  CycleError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Exact integer helpers shared by the tree and the verifier. All of them
// saturate at UINT64_MAX instead of wrapping.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t ipow(std::uint64_t base, unsigned exp);
std::uint64_t factorial(std::uint64_t k);
// k! / j! for j <= k
std::uint64_t falling_factorial_ratio(std::uint64_t k, std::uint64_t j);
bool is_power_of(std::uint64_t n, std::uint64_t base);
// floor(log_base n); requires n >= 1, base >= 2
unsigned ilog(std::uint64_t n, std::uint64_t base);

}  // namespace cyclemr
