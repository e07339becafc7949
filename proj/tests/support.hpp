#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace cyclemr::stats {

// Pearson statistic against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

// Generous acceptance bound: mean + 5 standard deviations of chi^2(df).
inline double chi_square_bound(std::size_t df) {
  const double d = static_cast<double>(df);
  return d + 5.0 * std::sqrt(2.0 * d);
}

}  // namespace cyclemr::stats
