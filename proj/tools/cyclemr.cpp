// cyclemr: simulate / verify / tree / sweep front end.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cyclemr/engine.hpp"
#include "cyclemr/lab.hpp"
#include "cyclemr/trace.hpp"
#include "cyclemr/tree.hpp"
#include "cyclemr/verifier.hpp"

using namespace cyclemr;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMemory = 2, kVerifyFailed = 3, kCapExceeded = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// `--config FILE` holds flat key=value lines. They are spliced in as
// `--key=value` before the user's own flags, so flags win (last value taken).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config file '" + file + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
      std::string key = trim(line.substr(0, eq));
      std::replace(key.begin(), key.end(), '_', '-');
      const std::string value = trim(line.substr(eq + 1));
      if (value.empty()) {  // `--key=` is rejected, `--key ""` is not
        from_file.push_back("--" + key);
        from_file.push_back(value);
      } else {
        from_file.push_back("--" + key + "=" + value);
      }
    }
    --i;
  }
  std::size_t lead = 0;  // subcommand names come first
  while (lead < args.size() && !args[lead].empty() && args[lead][0] != '-') ++lead;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(lead), from_file.begin(), from_file.end());
  return args;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<PointId> split_ids(const std::string& text) {
  std::vector<PointId> out;
  for (const auto& s : split(text)) {
    try {
      out.push_back(static_cast<PointId>(std::stoul(s)));
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + s + "'");
    }
  }
  return out;
}

// Model parameters shared by most subcommands.
struct ModelOpts {
  PointId n = 0;
  double epsilon = 0.5;
  std::uint32_t rho = 2;
  std::uint64_t seed = 1;
  std::uint32_t rounds = kDefaultRoundBudget;
  double memory_factor = kDefaultMemoryFactor;
  std::uint32_t machines = 0;
  std::uint32_t cap = 0;
  std::uint32_t copies = 3;
  std::string placement = "round-robin";
  std::uint32_t replicas = 1;
  std::uint64_t placement_seed = 0;

  void add(CLI::App* app, bool with_n, bool n_required = false, PointId n_default = 0) {
    n = n_default;
    if (with_n) {
      auto* o = app->add_option("--n", n, "points are 0..n");
      if (n_required) o->required();
    }
    app->add_option("--epsilon", epsilon, "memory exponent, M = cap = n^(1-epsilon)");
    app->add_option("--rho", rho, "growth base");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--rounds", rounds, "round budget");
    app->add_option("--memory-factor", memory_factor, "cap = ceil(factor * n^(1-epsilon))");
    app->add_option("--machines", machines, "machine count override");
    app->add_option("--cap", cap, "memory cap override (paths per machine)");
    app->add_option("--copies", copies, "replicating-hash copies");
    app->add_option("--placement", placement, "round-robin | seeded-random | replicated");
    app->add_option("--replicas", replicas, "replicated placement copies");
    app->add_option("--placement-seed", placement_seed, "seeded-random placement seed");
  }
  Config config() const { return make_config(n, epsilon, rho, seed, memory_factor, rounds, machines, cap); }
  Placement placement_spec() const { return Placement{parse_placement(placement), replicas, placement_seed}; }
  StrategyParams params() const { return StrategyParams{seed, copies}; }
  ojson json() const {
    const Config c = config();
    ojson j;
    j["n"] = n;
    j["epsilon"] = epsilon;
    j["rho"] = rho;
    j["seed"] = seed;
    j["rounds"] = rounds;
    j["memory_factor"] = memory_factor;
    j["machines"] = c.machines;
    j["memory_cap"] = c.memory_cap;
    j["copies"] = copies;
    j["placement"] = placement;
    j["replicas"] = replicas;
    j["placement_seed"] = placement_seed;
    return j;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

// Optional JSONL report file: header first, then the records.
struct Report {
  std::optional<std::ofstream> file;
  void open(const std::string& path, const ojson& config, std::uint64_t seed) {
    if (path.empty()) return;
    file = open_out(path);
    write_jsonl(*file, provenance_header(config, seed));
  }
  void emit(const ojson& record) {
    std::cout << record.dump() << '\n';
    if (file) write_jsonl(*file, record);
  }
};

// ------------------------------------------------------------------ simulate

struct SimulateOpts {
  ModelOpts model;
  std::string strategy = "endpoint-hash";
  std::string family = "one-cycle";
  std::string instance;
  std::string trace = "trace.jsonl";
  bool verbose = false;
  bool no_stop = false;
};

int cmd_simulate(const SimulateOpts& o) {
  if (!is_known_strategy(o.strategy)) throw UsageError("unknown strategy '" + o.strategy + "'");
  const Config cfg = o.model.config();
  Instance inst = o.instance.empty() ? (parse_family(o.family) == Family::two_cycle
                                            ? two_cycle_instance(o.model.n, o.model.seed, false)
                                            : random_one_cycle(o.model.n, o.model.seed))
                                     : Instance::parse(o.instance);
  if (inst.n() != o.model.n) throw UsageError("--instance has n=" + std::to_string(inst.n()));
  const auto strategy = strategy_factory(o.strategy, o.model.params())(inst);
  RunOptions ro;
  ro.placement = o.model.placement_spec();
  ro.trace = o.verbose ? TraceLevel::full : TraceLevel::summary;
  ro.stop_on_decision = !o.no_stop;

  ojson conf = o.model.json();
  conf["strategy"] = o.strategy;
  conf["family"] = topology_name(inst.topology());
  conf["instance"] = inst.serialize();
  conf["verbose"] = o.verbose;
  conf["stop_on_decision"] = ro.stop_on_decision;
  conf["threshold"] = min_deciding_length(o.model.n);

  RunResult res;
  std::optional<std::string> infeasible;
  try {
    res = run(inst, *strategy, cfg, ro);
  } catch (const CycleError& e) {
    if (e.code() != Errc::capacity_infeasible) throw;
    infeasible = e.what();
  }
  const std::string run_id = o.strategy + "-n" + std::to_string(o.model.n) + "-s" + std::to_string(o.model.seed);
  if (!o.trace.empty()) {
    auto out = open_out(o.trace);
    write_jsonl(out, provenance_header(conf, o.model.seed));
    write_trace(out, res, run_id, o.verbose);
    if (infeasible) write_jsonl(out, ojson{{"run_id", run_id}, {"event", "capacity_infeasible"}, {"detail", *infeasible}});
  }
  if (infeasible) {
    std::cout << "run=" << run_id << " decision=memory-exceeded round=0 detail=\"" << *infeasible << "\"\n";
    return kMemory;
  }
  std::uint32_t max_len = 0;
  for (const auto& t : res.rounds) max_len = std::max(max_len, t.max_len);
  std::cout << "run=" << run_id << " decision=" << decision_name(res.decision) << " round=" << res.decision_round
            << " rounds_run=" << res.rounds.size() << " max_len=" << max_len << " machines=" << cfg.machines
            << " cap=" << cfg.memory_cap;
  if (res.violation) {
    std::cout << " violation_round=" << res.violation->round << " violation_machine=" << res.violation->machine
              << " inbox=" << res.violation->inbox;
  }
  std::cout << '\n';
  return res.violation ? kMemory : kOk;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  ModelOpts model;
  std::string strategies;  // comma list; empty = shipped
  std::string profile = "literal";
  bool exhaustive = false;
  std::string i1, i2, h;
  std::uint32_t min_h = 4;
  std::string partition;
  std::uint32_t sampled = 0;
  int census = -1;
  std::uint32_t trials = 1000;
  std::uint32_t kappa = 0;
  double floor = 0.99;
  std::string trace;
  std::uint32_t seeds = 50;
  double max_ratio = 3.0;
  std::uint32_t machine = 0;
  std::uint64_t node_cap = kDefaultNodeCap;
  std::string report;
};

std::vector<std::string> strategy_list(const std::string& text, bool default_shipped = true) {
  auto list = split(text);
  if (list.empty() && default_shipped) list = shipped_strategies();
  for (const auto& s : list) {
    if (!is_known_strategy(s)) throw UsageError("unknown strategy '" + s + "'");
  }
  return list;
}

ojson verify_config(const VerifyOpts& o, const std::string& check) {
  ojson j = o.model.json();
  j["check"] = check;
  j["strategies"] = strategy_list(o.strategies);
  j["profile"] = o.profile;
  j["exhaustive"] = o.exhaustive;
  return j;
}

int verify_invariance(const VerifyOpts& o) {
  const Config cfg = o.model.config();
  const MarginProfile profile = parse_profile(o.profile);
  Report rep;
  rep.open(o.report, verify_config(o, "invariance"), o.model.seed);
  bool failed = false;
  for (const auto& name : strategy_list(o.strategies)) {
    const auto factory = strategy_factory(name, o.model.params());
    if (o.exhaustive) {
      const auto r = check_invariance_exhaustive(name, factory, cfg, profile, o.min_h, o.node_cap);
      ojson j = to_json(r);
      j["thresholds"] = ojson::array();
      for (std::uint32_t k = 1; k <= r.rounds; ++k) j["thresholds"].push_back(to_json(thresholds(profile, cfg.rho, k)));
      rep.emit(j);
      failed = failed || !r.passed();
    } else {
      if (o.i1.empty() || o.i2.empty() || o.h.empty()) throw UsageError("need --i1, --i2 and --H, or --exhaustive");
      const auto r = check_invariance(Instance::parse(o.i1), Instance::parse(o.i2), split_ids(o.h), factory, cfg, profile);
      ojson j = to_json(r);
      j["strategy"] = name;
      rep.emit(j);
      failed = failed || !r.passed();
    }
  }
  return failed ? kVerifyFailed : kOk;
}

int verify_veiled(const VerifyOpts& o, bool ascendant) {
  const Config cfg = o.model.config();
  const MarginProfile profile = parse_profile(o.profile);
  Report rep;
  rep.open(o.report, verify_config(o, ascendant ? "ascendant" : "veiled"), o.model.seed);
  const auto names = strategy_list(o.strategies.empty() ? "endpoint-hash" : o.strategies);
  bool failed = false;
  for (const auto& name : names) {
    const auto factory = strategy_factory(name, o.model.params());
    if (o.census >= 0) {
      const auto c = veiled_census(static_cast<unsigned>(o.census), factory, cfg, profile, o.node_cap);
      rep.emit(ojson{{"check", "veiled-census"}, {"strategy", name}, {"level", c.level}, {"partitions", c.partitions},
                     {"veiled", c.veiled}, {"fraction", c.fraction()}});
      continue;
    }
    if (o.partition.empty()) throw UsageError("need --partition or --census");
    const auto node = PartitionNode::parse(cfg.n, cfg.rho, o.partition);
    if (ascendant) {
      const bool ok = check_ascendant_veiled(node, factory, cfg, profile, o.node_cap);
      rep.emit(ojson{{"check", "ascendant-veiled"}, {"strategy", name}, {"partition", node.to_string()},
                     {"level", node.level()}, {"verdict", ok ? "ascendant-veiled" : "not-ascendant-veiled"}});
      failed = failed || !ok;
    } else {
      VeiledMode mode;
      mode.exhaustive = o.sampled == 0;
      mode.samples = o.sampled;
      mode.seed = o.model.seed;
      const auto r = check_veiled(node, name, factory, cfg, profile, mode, o.node_cap);
      rep.emit(to_json(r));
      failed = failed || (mode.exhaustive && r.verdict == Verdict::not_veiled);
    }
  }
  return failed ? kVerifyFailed : kOk;
}

int verify_round1(const VerifyOpts& o) {
  const Config cfg = o.model.config();
  Report rep;
  rep.open(o.report, verify_config(o, "round1"), o.model.seed);
  const std::uint32_t kappa = o.kappa != 0 ? o.kappa : std::max<std::uint32_t>(1, o.model.rho / 32);
  bool failed = false;
  for (const auto& name : strategy_list(o.strategies.empty() ? "endpoint-hash" : o.strategies)) {
    const auto st = check_round1(strategy_factory(name, o.model.params()), cfg, o.trials, kappa, o.floor,
                                 o.model.placement_spec());
    ojson j = to_json(st);
    j["strategy"] = name;
    j["placement"] = o.model.placement;
    rep.emit(j);
    failed = failed || !st.passed();
  }
  return failed ? kVerifyFailed : kOk;
}

int verify_growth(const VerifyOpts& o) {
  Report rep;
  rep.open(o.report, verify_config(o, "growth"), o.model.seed);
  if (!o.trace.empty()) {
    std::ifstream in(o.trace);
    if (!in) throw UsageError("cannot read '" + o.trace + "'");
    const auto r = check_growth(read_trace_max_lengths(in), o.model.rho);
    rep.emit(to_json(r));
    return r.flags == 0 ? kOk : kVerifyFailed;
  }
  if (o.model.n == 0) throw UsageError("need --n or --trace");
  bool failed = false;
  for (const auto& name : strategy_list(o.strategies.empty() ? "endpoint-hash" : o.strategies)) {
    std::vector<double> ratios;
    std::uint32_t flags = 0;
    for (std::uint32_t k = 0; k < o.seeds; ++k) {
      ModelOpts m = o.model;
      m.seed = o.model.seed + k;
      const Config cfg = m.config();
      const Instance inst = random_one_cycle(cfg.n, m.seed);
      const auto strategy = strategy_factory(name, m.params())(inst);
      RunOptions ro;
      ro.placement = m.placement_spec();
      const auto g = check_growth(run(inst, *strategy, cfg, ro), cfg.rho);
      flags += g.flags;
      for (const auto& row : g.rows) ratios.push_back(row.ratio);
    }
    std::sort(ratios.begin(), ratios.end());
    const double p99 = ratios.empty() ? 0.0 : quantile(ratios, 0.99);
    const bool ok = flags == 0 && p99 <= o.max_ratio;
    rep.emit(ojson{{"check", "growth"}, {"strategy", name}, {"seeds", o.seeds}, {"flags", flags},
                   {"ratio_p99", p99}, {"max_ratio", o.max_ratio}, {"verdict", ok ? "pass" : "fail"}});
    failed = failed || !ok;
  }
  return failed ? kVerifyFailed : kOk;
}

int verify_audit(const VerifyOpts& o) {
  const Config cfg = o.model.config();
  Report rep;
  rep.open(o.report, verify_config(o, "audit"), o.model.seed);
  bool failed = false;
  for (const auto& name : strategy_list(o.strategies)) {
    const auto factory = strategy_factory(name, o.model.params());
    PurviewReport r;
    if (o.exhaustive) {
      r = purview_audit_exhaustive(name, factory, cfg, 0, o.node_cap);
    } else {
      if (o.i1.empty() || o.i2.empty()) throw UsageError("need --i1 and --i2, or --exhaustive");
      r = purview_audit(factory, Instance::parse(o.i1), Instance::parse(o.i2), split_ids(o.h), cfg);
    }
    rep.emit(to_json(r));
    failed = failed || !r.passed();
  }
  return failed ? kVerifyFailed : kOk;
}

int verify_marks(const VerifyOpts& o) {
  const Config cfg = o.model.config();
  if (o.partition.empty()) throw UsageError("need --partition");
  Report rep;
  rep.open(o.report, verify_config(o, "marks"), o.model.seed);
  const auto node = PartitionNode::parse(cfg.n, cfg.rho, o.partition);
  bool failed = false;
  for (const auto& name : strategy_list(o.strategies)) {
    VeiledMode mode;
    mode.exhaustive = o.sampled == 0;
    mode.samples = o.sampled;
    mode.seed = o.model.seed;
    const auto r = mark_segments(node, strategy_factory(name, o.model.params()), cfg, o.machine,
                                 parse_profile(o.profile), mode, o.node_cap);
    ojson j = to_json(r);
    j["strategy"] = name;
    j["partition"] = node.to_string();
    j["machine"] = o.machine;
    rep.emit(j);
    failed = failed || (r.exhaustive && !r.within_cap());
  }
  return failed ? kVerifyFailed : kOk;
}

// ------------------------------------------------------------------ tree

struct TreeOpts {
  PointId n = 0;
  std::uint32_t rho = 2;
  bool counts = false;
  bool dump = false;
  std::uint64_t cap = kDefaultNodeCap;
};

int cmd_tree(const TreeOpts& o) {
  build_tree(o.n, o.rho);
  if (!o.counts && !o.dump) throw UsageError("need --counts or --dump");
  const auto e = enumerate_tree(o.n, o.rho, o.cap, o.dump);
  if (o.counts) {
    for (std::size_t i = 0; i < e.counts.size(); ++i) std::cout << (i ? "," : "") << e.counts[i];
    std::cout << '\n';
  }
  if (o.dump) {
    for (const auto& leaf : e.leaves) {
      for (std::size_t i = 0; i < leaf.size(); ++i) std::cout << (i ? "," : "") << leaf[i];
      std::cout << '\n';
    }
  }
  return kOk;
}

// ------------------------------------------------------------------ sweep

struct SweepOpts {
  ModelOpts model;
  std::string ns;
  std::string strategies = "endpoint-hash";
  std::string families = "one-cycle";
  std::uint32_t seeds = 10;
  std::string csv = "sweep.csv";
  std::string jsonl = "sweep.jsonl";
  bool lenient = false;
};

int cmd_sweep(const SweepOpts& o) {
  SweepSpec spec;
  for (auto n : split_ids(o.ns)) spec.ns.push_back(n);
  spec.strategies = split(o.strategies);
  for (const auto& f : split(o.families)) spec.families.push_back(parse_family(f));
  if (spec.ns.empty() || spec.strategies.empty() || spec.families.empty() || o.seeds == 0) {
    throw UsageError("empty sweep: need --n, --strategies, --families and --seeds > 0");
  }
  spec.epsilon = o.model.epsilon;
  spec.rho = o.model.rho;
  spec.seeds = o.seeds;
  spec.rounds = o.model.rounds;
  spec.master_seed = o.model.seed;
  spec.memory_factor = o.model.memory_factor;
  spec.machines = o.model.machines;
  spec.memory_cap = o.model.cap;
  spec.copies = o.model.copies;
  spec.placement = o.model.placement_spec();
  spec.strict = !o.lenient;
  const SweepResult res = run_sweep(spec);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  if (!o.csv.empty()) {
    auto out = open_out(o.csv);
    write_sweep_csv(out, spec, res);
  }
  if (!o.jsonl.empty()) {
    auto out = open_out(o.jsonl);
    write_sweep_jsonl(out, spec, res);
  }
  std::cout << kSweepCsvHeader << '\n';
  std::ostringstream body;
  write_sweep_csv(body, spec, res);
  std::string line;
  std::istringstream lines(body.str());
  std::getline(lines, line);  // provenance
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) std::cout << line << '\n';
  try {
    const auto fit = fit_log(res);
    std::cout << "fit slope=" << fit.slope << " intercept=" << fit.intercept << '\n';
  } catch (const CycleError&) {
    std::cout << "fit underdetermined\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector

  CLI::App app{"cyclemr: restricted path-merging MapReduce simulator and model checker"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.add_option("--config", "flat key=value file; flags override its keys");

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "run one instance and write its trace");
  sim.model.add(simulate, true, true);
  simulate->add_option("--strategy", sim.strategy, "endpoint-hash | id-block | replicating-hash | all-to-zero | injected-violation");
  simulate->add_option("--family", sim.family, "one-cycle | two-cycle");
  simulate->add_option("--instance", sim.instance, "explicit instance line instead of a random one");
  simulate->add_option("--trace", sim.trace, "trace JSONL path (empty: none)");
  simulate->add_flag("--verbose", sim.verbose, "dump every inbox/outbox in the trace");
  simulate->add_flag("--no-stop", sim.no_stop, "keep running after a decision");

  VerifyOpts ver;
  auto* verify = app.add_subcommand("verify", "invariance, veiled, growth and model checks");
  verify->require_subcommand(1);
  struct Check {
    const char* name;
    const char* help;
  };
  std::vector<CLI::App*> checks;
  for (const Check& c : {Check{"invariance", "local invariance claims"}, Check{"veiled", "veiled partition check"},
                         Check{"ascendant", "ascendant-veiled check"}, Check{"round1", "round-1 path length bound"},
                         Check{"growth", "per-round growth bound"}, Check{"audit", "routing purview audit"},
                         Check{"marks", "marked segments of a partition"}}) {
    auto* sub = verify->add_subcommand(c.name, c.help);
    checks.push_back(sub);
  }
  // Every check takes the full option set; unused ones are ignored.
  for (auto* sub : checks) {
    const bool invariance_like = sub->get_name() == "invariance" || sub->get_name() == "audit" ||
                                 sub->get_name() == "veiled" || sub->get_name() == "ascendant" ||
                                 sub->get_name() == "marks";
    ver.model.add(sub, true, false, invariance_like ? 8 : 0);
    sub->add_option("--strategy,--strategies", ver.strategies, "comma list (default: shipped strategies)");
    sub->add_option("--profile", ver.profile, "literal | rescaled | nested");
    sub->add_flag("--exhaustive", ver.exhaustive, "enumerate every instance");
    sub->add_option("--i1", ver.i1, "first instance line");
    sub->add_option("--i2", ver.i2, "second instance line");
    sub->add_option("--H,--common", ver.h, "common path, comma-separated IDs");
    sub->add_option("--min-h", ver.min_h, "shortest H in exhaustive mode");
    sub->add_option("--partition", ver.partition, "partition, segments separated by |");
    sub->add_option("--sampled", ver.sampled, "sampled mode with this many instance pairs");
    sub->add_option("--census", ver.census, "check every partition of this level");
    sub->add_option("--trials", ver.trials, "round-1 trials");
    sub->add_option("--kappa", ver.kappa, "round-1 length bound (default max(1, rho/32))");
    sub->add_option("--floor", ver.floor, "round-1 pass threshold");
    sub->add_option("--trace", ver.trace, "recompute growth from a trace file");
    sub->add_option("--seeds", ver.seeds, "growth seeds");
    sub->add_option("--max-ratio", ver.max_ratio, "growth p99 bound");
    sub->add_option("--machine", ver.machine, "machine for marked segments");
    sub->add_option("--node-cap", ver.node_cap, "enumeration cap");
    sub->add_option("--report", ver.report, "also write records to this JSONL file");
  }

  TreeOpts tr;
  auto* tree = app.add_subcommand("tree", "count or dump the permutation tree");
  tree->add_option("--n", tr.n, "segment count at the leaves")->required();
  tree->add_option("--rho", tr.rho, "branching base");
  tree->add_flag("--counts", tr.counts, "print node counts per level");
  tree->add_flag("--dump", tr.dump, "print every leaf permutation");
  tree->add_option("--cap", tr.cap, "node cap");

  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "decision-round statistics over n, strategies and seeds");
  sw.model.add(sweep, false);
  sweep->add_option("--n,--ns", sw.ns, "comma list of n");
  sweep->add_option("--strategy,--strategies", sw.strategies, "comma list");
  sweep->add_option("--family,--families", sw.families, "comma list: one-cycle, two-cycle, mixed");
  sweep->add_option("--seeds", sw.seeds, "seeds per cell");
  sweep->add_option("--csv", sw.csv, "CSV output path");
  sweep->add_option("--jsonl", sw.jsonl, "JSONL output path");
  sweep->add_flag("--lenient", sw.lenient, "round n to the nearest power of rho instead of failing");

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (tree->parsed()) return cmd_tree(tr);
    if (sweep->parsed()) return cmd_sweep(sw);
    for (auto* sub : checks) {
      if (!sub->parsed()) continue;
      const std::string name = sub->get_name();
      if (name == "invariance") return verify_invariance(ver);
      if (name == "veiled") return verify_veiled(ver, false);
      if (name == "ascendant") return verify_veiled(ver, true);
      if (name == "round1") return verify_round1(ver);
      if (name == "growth") return verify_growth(ver);
      if (name == "audit") return verify_audit(ver);
      if (name == "marks") return verify_marks(ver);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CycleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::cap_exceeded: return kCapExceeded;
      case Errc::capacity_infeasible: return kMemory;
      default: return kUsage;
    }
  }
  return kUsage;
}
