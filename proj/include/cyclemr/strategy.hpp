#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cyclemr/config.hpp"
#include "cyclemr/history.hpp"
#include "cyclemr/instance.hpp"

namespace cyclemr {

// Everything a routing rule may look at: the path's own IDs and history, the
// round, the machine holding it and the global constants. No locations, no
// other paths.
class StrategyView {
 public:
  StrategyView(std::span<const PointId> head, std::span<const PointId> tail, std::uint64_t history_digest,
               const HistoryNode* history, Round round, MachineIndex machine, const Config& config) noexcept
      : head_(head), tail_(tail), digest_(history_digest), history_(history), round_(round), machine_(machine),
        config_(&config) {}

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(head_.size() + tail_.size()); }
  PointId point(std::uint32_t i) const noexcept { return i < head_.size() ? head_[i] : tail_[i - head_.size()]; }
  PointId front() const noexcept { return point(0); }
  PointId back() const noexcept { return point(size() - 1); }
  std::vector<PointId> points() const;

  std::uint64_t history_digest() const noexcept { return digest_; }
  // Null unless the run keeps full history trees.
  const HistoryNode* history() const noexcept { return history_; }

  Round round() const noexcept { return round_; }
  MachineIndex machine() const noexcept { return machine_; }
  PointId n() const noexcept { return config_->n; }
  double epsilon() const noexcept { return config_->epsilon; }
  std::uint32_t rho() const noexcept { return config_->rho; }
  std::uint32_t machines() const noexcept { return config_->machines; }

 private:
  std::span<const PointId> head_;
  std::span<const PointId> tail_;
  std::uint64_t digest_;
  const HistoryNode* history_;
  Round round_;
  MachineIndex machine_;
  const Config* config_;
};

// A routing rule. route() must be a pure function of the view (and the
// strategy's own seed) and must name at least one machine.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual void route(const StrategyView& view, std::vector<MachineIndex>& targets) const = 0;
};

std::unique_ptr<Strategy> make_endpoint_hash(std::uint64_t seed);
std::unique_ptr<Strategy> make_id_block();
std::unique_ptr<Strategy> make_replicating_hash(std::uint32_t copies, std::uint64_t seed);
// Sends everything to machine 0; used to force memory overflow.
std::unique_ptr<Strategy> make_all_to_zero();
// Model violation on purpose: looks up where the path sits in `instance` and
// routes by that location.
std::unique_ptr<Strategy> make_location_peek(const Instance& instance, std::uint64_t seed);

// Builds the strategy for one instance. Conforming strategies ignore the instance.
using StrategyFactory = std::function<std::unique_ptr<Strategy>(const Instance&)>;

struct StrategyParams {
  std::uint64_t seed = 1;
  std::uint32_t copies = 3;  // replicating-hash only
};

// endpoint-hash | id-block | replicating-hash | all-to-zero | injected-violation
StrategyFactory strategy_factory(const std::string& name, StrategyParams params = {});
bool is_known_strategy(const std::string& name);
// The conforming strategies shipped with the engine.
std::vector<std::string> shipped_strategies();

}  // namespace cyclemr
