#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlpgg/population.hpp"

namespace mlpgg {

enum class StrategySetting { binary, level_based };

std::string_view to_string(StrategySetting setting);
StrategySetting parse_strategy_setting(std::string_view text);

// Number of strategy types in a setting: 2 for binary, 8 for level-based.
constexpr std::size_t strategy_count(StrategySetting setting) {
  return setting == StrategySetting::binary ? 2 : 8;
}

// A player's discrete choice. Binary strategies cooperate or defect at every level;
// level-based strategies choose per level, labeled pairwise/local/global (e.g. "CCD").
class Strategy {
 public:
  constexpr Strategy() = default;

  static constexpr Strategy binary(bool cooperate) {
    return Strategy(StrategySetting::binary, cooperate ? 0b111 : 0);
  }
  static constexpr Strategy level_based(bool pairwise, bool local, bool global) {
    return Strategy(StrategySetting::level_based,
                    static_cast<std::uint8_t>((pairwise ? 4 : 0) | (local ? 2 : 0) | (global ? 1 : 0)));
  }
  // Inverse of index(): canonical order is C, D or CCC, CCD, ..., DDD.
  static Strategy from_index(StrategySetting setting, std::size_t index);

  // Fully cooperative / fully defecting member of a setting.
  static constexpr Strategy all_cooperate(StrategySetting s) {
    return s == StrategySetting::binary ? binary(true) : level_based(true, true, true);
  }
  static constexpr Strategy all_defect(StrategySetting s) {
    return s == StrategySetting::binary ? binary(false) : level_based(false, false, false);
  }

  constexpr StrategySetting setting() const { return setting_; }
  constexpr bool cooperates(Level level) const {
    switch (level) {
      case Level::pairwise: return (coop_mask_ & 4) != 0;
      case Level::local: return (coop_mask_ & 2) != 0;
      case Level::global: return (coop_mask_ & 1) != 0;
    }
    return false;
  }
  constexpr std::size_t cooperating_levels() const {
    return static_cast<std::size_t>(((coop_mask_ >> 2) & 1) + ((coop_mask_ >> 1) & 1) + (coop_mask_ & 1));
  }
  std::size_t index() const;

  constexpr bool operator==(const Strategy&) const = default;

 private:
  constexpr Strategy(StrategySetting setting, std::uint8_t mask) : setting_(setting), coop_mask_(mask) {}

  StrategySetting setting_ = StrategySetting::binary;
  std::uint8_t coop_mask_ = 0;  // bit 2 pairwise, bit 1 local, bit 0 global
};

// "C"/"D" parse to binary strategies; three letters from {C, D} parse to level-based ones.
Strategy parse_strategy_label(std::string_view label);
std::string format_strategy(Strategy strategy);

// Labels of a setting in canonical order.
std::vector<std::string> strategy_labels(StrategySetting setting);

// Per-game stake: sigma / (3 * group_count) when cooperating at that level, else zero.
double contribution(Strategy strategy, Level level, std::size_t group_count, double sigma);

// One strategy per node; every entry belongs to the profile's setting.
class StrategyProfile {
 public:
  StrategyProfile(StrategySetting setting, std::vector<Strategy> strategies);
  static StrategyProfile uniform(StrategySetting setting, std::size_t node_count, Strategy strategy);

  StrategySetting setting() const { return setting_; }
  std::size_t size() const { return strategies_.size(); }
  Strategy operator[](NodeId i) const { return strategies_[i]; }
  void set(NodeId i, Strategy s);
  std::span<const Strategy> strategies() const { return strategies_; }

  // Count per strategy type in canonical order.
  std::vector<std::size_t> counts() const;
  bool monomorphic() const;

  bool operator==(const StrategyProfile&) const = default;

 private:
  StrategySetting setting_;
  std::vector<Strategy> strategies_;
};

}  // namespace mlpgg
