#include "cyclemr/config.hpp"

#include <cmath>

namespace cyclemr {

std::uint32_t sublinear_budget(PointId n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw CycleError(Errc::bad_size, "epsilon must lie in (0,1)");
  const double x = std::pow(static_cast<double>(n), 1.0 - epsilon);
  const double rounded = std::round(x);
  const double value = std::fabs(x - rounded) < 1e-9 * std::max(1.0, x) ? rounded : std::ceil(x);
  return static_cast<std::uint32_t>(std::max(1.0, value));
}

Config make_config(PointId n, double epsilon, std::uint32_t rho, std::uint64_t seed, double memory_factor,
                   std::uint32_t rounds, std::uint32_t machines_override, std::uint32_t cap_override) {
  if (memory_factor <= 0.0) throw CycleError(Errc::bad_size, "memory factor must be positive");
  Config c;
  c.n = n;
  c.epsilon = epsilon;
  c.rho = rho;
  c.seed = seed;
  c.rounds = rounds;
  c.memory_factor = memory_factor;
  const double base = std::pow(static_cast<double>(n), 1.0 - epsilon);
  c.machines = machines_override != 0 ? machines_override : sublinear_budget(n, epsilon);
  if (cap_override != 0) {
    c.memory_cap = cap_override;
  } else {
    const double scaled = memory_factor * base;
    const double rounded = std::round(scaled);
    const double value = std::fabs(scaled - rounded) < 1e-9 * std::max(1.0, scaled) ? rounded : std::ceil(scaled);
    c.memory_cap = static_cast<std::uint32_t>(std::max(1.0, value));
  }
  return c;
}

double analysis_round_count(PointId n, double epsilon, double rho) {
  return epsilon / 2.0 * std::log(static_cast<double>(n)) / std::log(rho);
}

}  // namespace cyclemr
