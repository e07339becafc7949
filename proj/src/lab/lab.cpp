#include "cyclemr/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "cyclemr/rng.hpp"

namespace cyclemr {

Family parse_family(const std::string& name) {
  if (name == "one-cycle") return Family::one_cycle;
  if (name == "two-cycle") return Family::two_cycle;
  if (name == "mixed") return Family::mixed;
  throw CycleError(Errc::parse_error, "unknown family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::one_cycle: return "one-cycle";
    case Family::two_cycle: return "two-cycle";
    case Family::mixed: return "mixed";
  }
  return "?";
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw CycleError(Errc::bad_size, "quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

LogFit fit_log(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw CycleError(Errc::bad_size, "fit inputs differ in length");
  if (x.size() < 3) throw CycleError(Errc::underdetermined, "need at least 3 decided cells");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw CycleError(Errc::underdetermined, "all cells share one n");
  LogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) f.residuals.push_back(y[i] - (f.intercept + f.slope * x[i]));
  return f;
}

LogFit fit_log(const SweepResult& result, const std::string& strategy, std::optional<Family> family) {
  std::vector<double> x, y;
  for (const auto& c : result.cells) {
    if (!strategy.empty() && c.strategy != strategy) continue;
    if (family && c.family != *family) continue;
    if (!c.round_p50) continue;
    x.push_back(std::log2(static_cast<double>(c.n)));
    y.push_back(*c.round_p50);
  }
  return fit_log(x, y);
}

namespace {

struct SeedOutcome {
  bool aborted = false;
  bool decided = false;
  bool two_cycle = false;
  Round round = 0;
  std::vector<double> ratios;
};

PointId nearest_power(PointId n, std::uint32_t rho) {
  PointId best = 1;
  for (std::uint64_t p = 1; p <= std::uint64_t{n} * rho; p *= rho) {
    const auto d = [&](std::uint64_t v) { return v > n ? v - n : n - v; };
    if (d(p) < d(best)) best = static_cast<PointId>(p);
  }
  return best;
}

std::uint64_t strategy_tag(const std::string& name) {
  std::uint64_t h = 0x73747261ULL;
  for (char c : name) h = hash_combine(h, static_cast<unsigned char>(c));
  return h;
}

SeedOutcome run_seed(const SweepSpec& spec, PointId n, const std::string& strategy, Family family,
                     std::uint32_t k) {
  const std::uint64_t seed =
      hash_values(spec.master_seed, n, strategy_tag(strategy), static_cast<std::uint64_t>(family), k);
  const bool two = family == Family::two_cycle || (family == Family::mixed && k % 2 == 1);
  const Instance inst = two ? two_cycle_instance(n, seed, false) : random_one_cycle(n, seed);
  const Config cfg = make_config(n, spec.epsilon, spec.rho, seed, spec.memory_factor, spec.rounds, spec.machines,
                                 spec.memory_cap);
  StrategyParams params;
  params.seed = hash_values(seed, 0x73656564ULL);
  params.copies = spec.copies;
  const auto strat = strategy_factory(strategy, params)(inst);
  RunOptions options;
  options.placement = spec.placement;
  options.stop_when_saturated = true;
  SeedOutcome out;
  out.two_cycle = two;
  RunResult res;
  try {
    res = run(inst, *strat, cfg, options);
  } catch (const CycleError& e) {
    if (e.code() != Errc::capacity_infeasible) throw;
    out.aborted = true;
    return out;
  }
  out.aborted = res.decision == Decision::memory_exceeded;
  out.decided = res.decision == Decision::single_cycle_evidence;
  out.round = res.decision_round;
  double prev = 1;
  for (const auto& t : res.rounds) {
    if (t.aborted) break;
    out.ratios.push_back(static_cast<double>(t.max_len) / prev);
    prev = std::max<double>(1, t.max_len);
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.ns.empty() || spec.strategies.empty() || spec.families.empty() || spec.seeds == 0) {
    throw CycleError(Errc::bad_size, "empty sweep");
  }
  SweepResult result;
  std::vector<PointId> ns;
  for (PointId n : spec.ns) {
    if (is_power_of(n, spec.rho)) {
      ns.push_back(n);
    } else if (spec.strict) {
      throw CycleError(Errc::bad_size, std::to_string(n) + " is not a power of " + std::to_string(spec.rho));
    } else {
      const PointId p = nearest_power(n, spec.rho);
      result.warnings.push_back("n=" + std::to_string(n) + " rounded to " + std::to_string(p));
      ns.push_back(p);
    }
  }
  for (const auto& s : spec.strategies) {
    if (!is_known_strategy(s)) throw CycleError(Errc::parse_error, "unknown strategy '" + s + "'");
  }
  for (const auto& strategy : spec.strategies) {
    for (Family family : spec.families) {
      std::vector<double> fit_x, fit_y;
      for (PointId n : ns) {
        std::vector<SeedOutcome> runs(spec.seeds);
        const auto count = static_cast<std::int64_t>(spec.seeds);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < count; ++k) {
          runs[static_cast<std::size_t>(k)] = run_seed(spec, n, strategy, family, static_cast<std::uint32_t>(k));
        }
        CellResult c;
        c.n = n;
        c.strategy = strategy;
        c.family = family;
        c.seeds = spec.seeds;
        std::vector<double> rounds, ratios;
        for (const auto& r : runs) {
          if (r.aborted) {
            ++c.aborted;
            continue;
          }
          ratios.insert(ratios.end(), r.ratios.begin(), r.ratios.end());
          if (!r.decided) continue;
          ++c.decided;
          if (r.two_cycle) ++c.misclassified;
          c.decision_rounds.push_back(r.round);
          rounds.push_back(r.round);
        }
        c.samples = c.seeds - c.aborted;
        c.decided_frac = c.samples ? static_cast<double>(c.decided) / c.samples : 0.0;
        if (!rounds.empty()) {
          std::sort(rounds.begin(), rounds.end());
          c.round_p25 = quantile(rounds, 0.25);
          c.round_p50 = quantile(rounds, 0.50);
          c.round_p75 = quantile(rounds, 0.75);
          c.round_mean = std::accumulate(rounds.begin(), rounds.end(), 0.0) / static_cast<double>(rounds.size());
          fit_x.push_back(std::log2(static_cast<double>(n)));
          fit_y.push_back(*c.round_p50);
        }
        if (!ratios.empty()) {
          std::sort(ratios.begin(), ratios.end());
          c.growth_p99 = quantile(ratios, 0.99);
        }
        if (fit_x.size() >= 2) {
          // two points already fix a line; fit_log itself insists on three
          const double mx = std::accumulate(fit_x.begin(), fit_x.end(), 0.0) / static_cast<double>(fit_x.size());
          const double my = std::accumulate(fit_y.begin(), fit_y.end(), 0.0) / static_cast<double>(fit_y.size());
          double sxx = 0, sxy = 0;
          for (std::size_t i = 0; i < fit_x.size(); ++i) {
            sxx += (fit_x[i] - mx) * (fit_x[i] - mx);
            sxy += (fit_x[i] - mx) * (fit_y[i] - my);
          }
          if (sxx > 0) c.slope_so_far = sxy / sxx;
        }
        result.cells.push_back(std::move(c));
      }
    }
  }
  return result;
}

namespace {

std::string num(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::string num(double v) { return num(std::optional<double>(v)); }

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  out << "# " << provenance_header(to_json(spec), spec.master_seed).dump() << '\n';
  out << kSweepCsvHeader << '\n';
  for (const auto& c : result.cells) {
    out << c.n << ',' << num(spec.epsilon) << ',' << spec.rho << ',' << c.strategy << ',' << family_name(c.family)
        << ',' << c.seeds << ',' << num(c.decided_frac) << ',' << num(c.round_p50) << ',' << num(c.round_p25) << ','
        << num(c.round_p75) << ',' << num(c.growth_p99) << ',' << num(c.slope_so_far) << '\n';
  }
}

void write_sweep_jsonl(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  write_jsonl(out, provenance_header(to_json(spec), spec.master_seed));
  const auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  for (const auto& w : result.warnings) write_jsonl(out, ojson{{"warning", w}});
  for (const auto& c : result.cells) {
    ojson j;
    j["n"] = c.n;
    j["epsilon"] = spec.epsilon;
    j["rho"] = spec.rho;
    j["strategy"] = c.strategy;
    j["family"] = family_name(c.family);
    j["seeds"] = c.seeds;
    j["aborted"] = c.aborted;
    j["samples"] = c.samples;
    j["decided"] = c.decided;
    j["misclassified"] = c.misclassified;
    j["decided_frac"] = c.decided_frac;
    j["undecided_frac"] = c.samples ? 1.0 - c.decided_frac : 0.0;
    j["round_p25"] = opt(c.round_p25);
    j["round_p50"] = opt(c.round_p50);
    j["round_p75"] = opt(c.round_p75);
    j["round_mean"] = opt(c.round_mean);
    j["growth_p99"] = opt(c.growth_p99);
    j["slope_so_far"] = opt(c.slope_so_far);
    j["decision_rounds"] = c.decision_rounds;
    write_jsonl(out, j);
  }
}

ojson to_json(const SweepSpec& spec) {
  ojson j;
  j["ns"] = spec.ns;
  j["epsilon"] = spec.epsilon;
  j["rho"] = spec.rho;
  j["strategies"] = spec.strategies;
  j["seeds"] = spec.seeds;
  ojson fams = ojson::array();
  for (Family f : spec.families) fams.push_back(family_name(f));
  j["families"] = fams;
  j["rounds"] = spec.rounds;
  j["master_seed"] = spec.master_seed;
  j["memory_factor"] = spec.memory_factor;
  j["machines"] = spec.machines;
  j["memory_cap"] = spec.memory_cap;
  j["copies"] = spec.copies;
  j["placement"] = placement_name(spec.placement.mode);
  j["replicas"] = spec.placement.replicas;
  j["placement_seed"] = spec.placement.seed;
  j["strict"] = spec.strict;
  return j;
}

}  // namespace cyclemr
