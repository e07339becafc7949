#include <algorithm>
#include <cmath>

#include "cyclemr/verifier.hpp"

namespace cyclemr {

MarginProfile parse_profile(const std::string& name) {
  if (name == "literal") return MarginProfile::literal;
  if (name == "rescaled") return MarginProfile::rescaled;
  if (name == "nested") return MarginProfile::nested;
  throw CycleError(Errc::parse_error, "unknown margin profile '" + name + "'");
}

const char* profile_name(MarginProfile p) {
  switch (p) {
    case MarginProfile::literal: return "literal";
    case MarginProfile::rescaled: return "rescaled";
    case MarginProfile::nested: return "nested";
  }
  return "?";
}

Thresholds thresholds(MarginProfile profile, std::uint32_t rho, unsigned round) {
  Thresholds t;
  t.round = round;
  const double scale = std::pow(static_cast<double>(rho), static_cast<double>(round));
  t.raw_margin = scale / 32.0;
  t.raw_cap = scale / 8.0;
  const auto clamp = [](double v) {
    return static_cast<std::uint32_t>(std::min(std::floor(v), 4.0e9));
  };
  switch (profile) {
    case MarginProfile::literal:
      t.margin = clamp(t.raw_margin);
      t.cap = clamp(t.raw_cap);
      t.overhang = t.margin;
      t.degenerate = t.raw_margin < 1.0 || t.raw_cap < 1.0;
      break;
    case MarginProfile::rescaled:
      t.margin = std::max<std::uint32_t>(1, clamp(t.raw_margin));
      t.cap = std::max<std::uint32_t>(2, clamp(t.raw_cap));
      t.overhang = t.margin;
      break;
    case MarginProfile::nested:
      t.raw_margin = std::pow(2.0, static_cast<double>(round)) - 1.0;
      t.raw_cap = 4.0 * t.raw_margin;
      t.margin = clamp(t.raw_margin);
      t.cap = std::max<std::uint32_t>(2, clamp(t.raw_cap));
      t.overhang = t.margin;
      break;
  }
  return t;
}

std::optional<WindowViolation> window_violation(std::span<const Path> set, const std::optional<Path>& window,
                                                const Thresholds& t) {
  if (!window) return std::nullopt;
  for (const Path& p : set) {
    if (window->contains(p)) {
      if (p.size() > t.cap) return WindowViolation{true, p, p.size()};
    } else if (auto c = common(p, *window); c && c->size() > t.overhang) {
      return WindowViolation{false, p, c->size()};
    }
  }
  return std::nullopt;
}

RunResult run_for_check(const Instance& instance, const StrategyFactory& factory, const Config& config,
                        std::uint32_t rounds, const Placement& placement) {
  const auto strategy = factory(instance);
  RunOptions options;
  options.placement = placement;
  options.trace = TraceLevel::full;
  options.stop_on_decision = false;
  options.rounds = rounds;
  return run(instance, *strategy, config, options);
}

}  // namespace cyclemr
