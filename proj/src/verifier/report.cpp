#include "cyclemr/verifier.hpp"

namespace cyclemr {

ojson to_json(const Thresholds& t) {
  ojson j;
  j["round"] = t.round;
  j["margin"] = t.margin;
  j["cap"] = t.cap;
  j["overhang"] = t.overhang;
  j["raw_margin"] = t.raw_margin;
  j["raw_cap"] = t.raw_cap;
  j["degenerate"] = t.degenerate;
  return j;
}

ojson to_json(const InvarianceReport& r) {
  ojson j;
  j["check"] = "invariance";
  j["i1"] = r.i1;
  j["i2"] = r.i2;
  j["h"] = r.h;
  ojson rounds = ojson::array();
  for (const auto& s : r.rounds) {
    ojson x;
    x["round"] = s.round;
    x["precondition"] = s.precondition;
    x["claim_i"] = s.claim_i ? ojson(*s.claim_i) : ojson(nullptr);
    x["claim_ii"] = s.claim_ii ? ojson(*s.claim_ii) : ojson(nullptr);
    rounds.push_back(x);
  }
  j["rounds"] = rounds;
  j["precondition_failed_at"] = r.precondition_failed_at ? ojson(*r.precondition_failed_at) : ojson(nullptr);
  j["verdict"] = r.passed() ? "pass" : "fail";
  j["witness"] = r.witness;
  return j;
}

ojson to_json(const ExhaustiveInvarianceReport& r) {
  ojson j;
  j["check"] = "invariance-exhaustive";
  j["strategy"] = r.strategy;
  j["n"] = r.n;
  j["rho"] = r.rho;
  j["profile"] = profile_name(r.profile);
  j["min_h"] = r.min_h;
  j["rounds"] = r.rounds;
  j["instances"] = r.instances;
  j["h_sequences"] = r.paths_h;
  j["instance_h"] = r.instance_h;
  j["asserted_pairs"] = r.asserted_pairs;
  j["precondition_fails"] = r.precondition_fails;
  j["claim_i_failures"] = r.claim_i_failures;
  j["claim_ii_failures"] = r.claim_ii_failures;
  j["verdict"] = r.passed() ? "pass" : "fail";
  if (r.witness) {
    ojson w;
    w["i1"] = r.witness->i1;
    w["i2"] = r.witness->i2;
    w["h"] = r.witness->h;
    w["round"] = r.witness->round;
    w["claim"] = r.witness->claim;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

ojson to_json(const PurviewReport& r) {
  ojson j;
  j["check"] = "purview";
  j["strategy"] = r.strategy;
  j["instances"] = r.instances;
  j["observations"] = r.observations;
  j["repeated"] = r.repeated;
  j["violations"] = r.violation_count;
  ojson w = ojson::array();
  for (const auto& v : r.violations) {
    ojson x;
    x["round"] = v.round;
    x["machine"] = v.machine;
    x["path"] = v.path;
    x["i1"] = v.i1;
    x["i2"] = v.i2;
    w.push_back(x);
  }
  j["witnesses"] = w;
  j["verdict"] = r.passed() ? "pass" : "fail";
  return j;
}

ojson to_json(const VeiledReport& r) {
  ojson j;
  j["check"] = "veiled";
  j["partition"] = r.partition;
  j["level"] = r.level;
  j["strategy"] = r.strategy;
  j["thresholds"] = to_json(r.thresholds);
  j["instances"] = r.instances;
  j["condition1_violations"] = r.condition1_count;
  j["condition1_witnesses"] = r.condition1;
  j["condition2_violations"] = r.condition2_count;
  j["condition2_witnesses"] = r.condition2;
  j["verdict"] = verdict_name(r.verdict);
  return j;
}

ojson to_json(const Round1Stats& r) {
  ojson j;
  j["check"] = "round1";
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["kappa"] = r.kappa;
  j["frequency"] = r.frequency();
  j["floor"] = r.floor;
  j["verdict"] = r.passed() ? "pass" : "fail";
  return j;
}

ojson to_json(const GrowthReport& r) {
  ojson j;
  j["check"] = "growth";
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    ojson x;
    x["round"] = row.round;
    x["max_len"] = row.max_len;
    x["ratio"] = row.ratio;
    x["bound"] = row.bound;
    x["flagged"] = row.flagged;
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["flags"] = r.flags;
  j["verdict"] = r.flags == 0 ? "pass" : "fail";
  return j;
}

ojson to_json(const MarkReport& r) {
  ojson j;
  j["check"] = "marked-segments";
  j["marked"] = r.marked;
  j["count"] = r.marked.size();
  j["cap"] = r.cap;
  j["instances"] = r.instances;
  j["exhaustive"] = r.exhaustive;
  j["verdict"] = r.within_cap() ? "pass" : "fail";
  return j;
}

}  // namespace cyclemr
