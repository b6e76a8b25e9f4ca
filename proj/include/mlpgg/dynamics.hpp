#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlpgg/payoff.hpp"
#include "mlpgg/population.hpp"
#include "mlpgg/rng.hpp"
#include "mlpgg/strategy.hpp"

namespace mlpgg {

// Fermi rule: probability that a focus with payoff focus_payoff copies a target with target_payoff.
// Never overflows, whatever beta * (focus_payoff - target_payoff) is.
double imitation_probability(double focus_payoff, double target_payoff, double beta);

// Who a player compares itself against each round.
enum class TargetMode {
  neighbor,    // uniform over graph neighbors
  population,  // uniform over everyone else; sensitivity checks only
};

std::string_view to_string(TargetMode mode);
TargetMode parse_target_mode(std::string_view text);

struct SimulationState {
  std::size_t round = 0;
  StrategyProfile profile;
  Rng rng;
};

// Synchronous update machinery for one graph. Holds the payoff engine and round buffers,
// so a single instance should drive a single run at a time.
class Simulator {
 public:
  Simulator(const PopulationGraph& graph, GameParams params, TargetMode target = TargetMode::neighbor);

  // Payoffs from the pre-round profile, then per player in node order: draw a target, then an
  // imitation draw, then (only when mu > 0) a mutation draw and a replacement index.
  // Adoptions are applied together after all draws.
  void step(SimulationState& state);

  const PayoffVector& last_payoffs() const { return payoffs_; }
  const GameParams& params() const { return params_; }

 private:
  const PopulationGraph* graph_;
  GameParams params_;
  TargetMode target_;
  PayoffEngine engine_;
  PayoffVector payoffs_;
  std::vector<NodeId> targets_;
};

SimulationState step(const SimulationState& state, const PopulationGraph& graph, const GameParams& params,
                     TargetMode target = TargetMode::neighbor);

struct StopCriteria {
  std::size_t max_rounds = 100000;
  // Consecutive rounds with an unchanged count vector that end the run; 0 disables.
  std::size_t stability_window = 2000;
  std::vector<std::size_t> snapshot_rounds;
};

enum class TerminalKind { absorbed, round_cap_reached, frequency_stable };

std::string_view to_string(TerminalKind kind);
TerminalKind parse_terminal_kind(std::string_view text);

struct TerminalStatus {
  TerminalKind kind = TerminalKind::round_cap_reached;
  std::optional<Strategy> strategy;  // set when absorbed
};

class Trajectory {
 public:
  Trajectory(StrategySetting setting, std::size_t node_count);

  StrategySetting setting() const { return setting_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t types() const { return strategy_count(setting_); }
  // Rows recorded, round 0 included.
  std::size_t rows() const { return counts_.size() / types(); }
  // Last round reached.
  std::size_t rounds() const { return rows() - 1; }
  std::span<const std::uint32_t> counts_at(std::size_t round) const;
  std::span<const std::uint32_t> final_counts() const { return counts_at(rounds()); }
  double frequency(std::size_t round, std::size_t type) const;

  void record(const StrategyProfile& profile);
  void add_snapshot(std::size_t round, StrategyProfile profile);

  const std::vector<std::pair<std::size_t, StrategyProfile>>& snapshots() const { return snapshots_; }
  const TerminalStatus& status() const { return status_; }
  void set_status(TerminalStatus status) { status_ = status; }
  const std::optional<StrategyProfile>& final_profile() const { return final_profile_; }
  void set_final_profile(StrategyProfile p) { final_profile_ = std::move(p); }

 private:
  StrategySetting setting_;
  std::size_t node_count_;
  std::vector<std::uint32_t> counts_;  // row-major, types() per round
  std::vector<std::pair<std::size_t, StrategyProfile>> snapshots_;
  TerminalStatus status_;
  std::optional<StrategyProfile> final_profile_;
};

// Iterates step until absorption (mu == 0 and monomorphic), a stable count vector, or the round cap.
Trajectory run(const PopulationGraph& graph, const StrategyProfile& initial, const GameParams& params,
               const StopCriteria& stop, std::uint64_t seed, TargetMode target = TargetMode::neighbor);

struct UniformRandomInit {
  StrategySetting setting = StrategySetting::binary;
};
struct FixedFractionInit {
  StrategySetting setting = StrategySetting::binary;
  std::vector<std::pair<Strategy, double>> fractions;
};
struct ExplicitInit {
  std::vector<Strategy> strategies;
};
using InitSpec = std::variant<UniformRandomInit, FixedFractionInit, ExplicitInit>;

StrategySetting setting_of(const InitSpec& spec);

// Reproducible initial profile. Fixed fractions are rounded to exact counts by largest remainder
// and placed by a seeded shuffle.
StrategyProfile initialize_profile(const PopulationGraph& graph, const InitSpec& spec, std::uint64_t seed);

}  // namespace mlpgg
