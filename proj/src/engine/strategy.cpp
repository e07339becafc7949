#include "cyclemr/strategy.hpp"

#include <algorithm>

#include "cyclemr/rng.hpp"

namespace cyclemr {

std::vector<PointId> StrategyView::points() const {
  std::vector<PointId> out(head_.begin(), head_.end());
  out.insert(out.end(), tail_.begin(), tail_.end());
  return out;
}

namespace {

MachineIndex endpoint_machine(std::uint64_t seed, Round round, PointId id, std::uint32_t machines) {
  return static_cast<MachineIndex>(reduce_range(hash_values(seed, 0x656e64ULL, round, id), machines));
}

class EndpointHash final : public Strategy {
 public:
  explicit EndpointHash(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "endpoint-hash"; }
  void route(const StrategyView& view, std::vector<MachineIndex>& targets) const override {
    targets.push_back(endpoint_machine(seed_, view.round(), view.front(), view.machines()));
    if (view.back() != view.front()) {
      targets.push_back(endpoint_machine(seed_, view.round(), view.back(), view.machines()));
    }
  }

 private:
  std::uint64_t seed_;
};

class IdBlock final : public Strategy {
 public:
  std::string name() const override { return "id-block"; }
  void route(const StrategyView& view, std::vector<MachineIndex>& targets) const override {
    targets.push_back(std::min(view.front(), view.back()) % view.machines());
  }
};

class ReplicatingHash final : public Strategy {
 public:
  ReplicatingHash(std::uint32_t copies, std::uint64_t seed) : copies_(copies), inner_(seed), seed_(seed) {}
  std::string name() const override { return "replicating-hash"; }
  void route(const StrategyView& view, std::vector<MachineIndex>& targets) const override {
    inner_.route(view, targets);
    const std::uint64_t content = hash_values(view.history_digest(), view.front(), view.back(), view.size());
    for (std::uint32_t j = 0; j + 2 < copies_; ++j) {
      const auto h = hash_values(seed_, 0x657874ULL, view.round(), content, j);
      targets.push_back(static_cast<MachineIndex>(reduce_range(h, view.machines())));
    }
  }

 private:
  std::uint32_t copies_;
  EndpointHash inner_;
  std::uint64_t seed_;
};

class AllToZero final : public Strategy {
 public:
  std::string name() const override { return "all-to-zero"; }
  void route(const StrategyView&, std::vector<MachineIndex>& targets) const override { targets.push_back(0); }
};

class LocationPeek final : public Strategy {
 public:
  LocationPeek(const Instance& instance, std::uint64_t seed) : instance_(&instance), seed_(seed) {}
  std::string name() const override { return "injected-violation"; }
  void route(const StrategyView& view, std::vector<MachineIndex>& targets) const override {
    const Location where = instance_->location_of(view.front());
    targets.push_back(static_cast<MachineIndex>(
        reduce_range(hash_values(seed_, 0x7065656bULL, view.round(), where), view.machines())));
  }

 private:
  const Instance* instance_;
  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<Strategy> make_endpoint_hash(std::uint64_t seed) { return std::make_unique<EndpointHash>(seed); }
std::unique_ptr<Strategy> make_id_block() { return std::make_unique<IdBlock>(); }
std::unique_ptr<Strategy> make_replicating_hash(std::uint32_t copies, std::uint64_t seed) {
  if (copies < 2) throw CycleError(Errc::bad_size, "replicating-hash needs at least 2 copies");
  return std::make_unique<ReplicatingHash>(copies, seed);
}
std::unique_ptr<Strategy> make_all_to_zero() { return std::make_unique<AllToZero>(); }
std::unique_ptr<Strategy> make_location_peek(const Instance& instance, std::uint64_t seed) {
  return std::make_unique<LocationPeek>(instance, seed);
}

StrategyFactory strategy_factory(const std::string& name, StrategyParams params) {
  if (name == "endpoint-hash") return [params](const Instance&) { return make_endpoint_hash(params.seed); };
  if (name == "id-block") return [](const Instance&) { return make_id_block(); };
  if (name == "replicating-hash") {
    return [params](const Instance&) { return make_replicating_hash(params.copies, params.seed); };
  }
  if (name == "all-to-zero") return [](const Instance&) { return make_all_to_zero(); };
  if (name == "injected-violation") {
    return [params](const Instance& inst) { return make_location_peek(inst, params.seed); };
  }
  throw CycleError(Errc::parse_error, "unknown strategy '" + name + "'");
}

bool is_known_strategy(const std::string& name) {
  return name == "endpoint-hash" || name == "id-block" || name == "replicating-hash" || name == "all-to-zero" ||
         name == "injected-violation";
}

std::vector<std::string> shipped_strategies() { return {"endpoint-hash", "id-block", "replicating-hash"}; }

}  // namespace cyclemr
