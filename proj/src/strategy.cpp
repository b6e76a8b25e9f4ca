#include "mlpgg/strategy.hpp"

#include <algorithm>

#include "mlpgg/errors.hpp"

namespace mlpgg {

std::string_view to_string(StrategySetting setting) {
  return setting == StrategySetting::binary ? "binary" : "level_based";
}

StrategySetting parse_strategy_setting(std::string_view text) {
  if (text == "binary") return StrategySetting::binary;
  if (text == "level_based" || text == "level-based") return StrategySetting::level_based;
  throw ParseError("unknown strategy setting '" + std::string(text) + "'");
}

Strategy Strategy::from_index(StrategySetting setting, std::size_t index) {
  if (index >= strategy_count(setting)) {
    throw IndexError("strategy index " + std::to_string(index) + " out of range");
  }
  if (setting == StrategySetting::binary) return binary(index == 0);
  // D is the high bit in canonical order, so the cooperation mask is the complement.
  auto mask = static_cast<std::uint8_t>(~index & 0b111);
  return level_based((mask & 4) != 0, (mask & 2) != 0, (mask & 1) != 0);
}

std::size_t Strategy::index() const {
  if (setting_ == StrategySetting::binary) return coop_mask_ ? 0 : 1;
  return static_cast<std::size_t>(~coop_mask_ & 0b111);
}

Strategy parse_strategy_label(std::string_view label) {
  auto flag = [&](char c) {
    if (c == 'C') return true;
    if (c == 'D') return false;
    throw ParseError("invalid strategy label '" + std::string(label) + "': expected C or D, got '" +
                     std::string(1, c) + "'");
  };
  if (label.size() == 1) return Strategy::binary(flag(label[0]));
  if (label.size() == 3) return Strategy::level_based(flag(label[0]), flag(label[1]), flag(label[2]));
  throw ParseError("invalid strategy label '" + std::string(label) + "': expected 1 or 3 letters");
}

std::string format_strategy(Strategy strategy) {
  auto letter = [&](Level level) { return strategy.cooperates(level) ? 'C' : 'D'; };
  if (strategy.setting() == StrategySetting::binary) return std::string(1, letter(Level::pairwise));
  return {letter(Level::pairwise), letter(Level::local), letter(Level::global)};
}

std::vector<std::string> strategy_labels(StrategySetting setting) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < strategy_count(setting); ++k) {
    labels.push_back(format_strategy(Strategy::from_index(setting, k)));
  }
  return labels;
}

double contribution(Strategy strategy, Level level, std::size_t group_count, double sigma) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw ParameterError("sigma must lie in (0, 1], got " + std::to_string(sigma));
  }
  if (group_count == 0) throw ParameterError("group count must be positive");
  if (!strategy.cooperates(level)) return 0.0;
  return sigma / (3.0 * static_cast<double>(group_count));
}

StrategyProfile::StrategyProfile(StrategySetting setting, std::vector<Strategy> strategies)
    : setting_(setting), strategies_(std::move(strategies)) {
  for (const auto& s : strategies_) {
    if (s.setting() != setting_) {
      throw ParameterError("profile mixes strategy settings: '" + format_strategy(s) + "' in a " +
                           std::string(to_string(setting_)) + " profile");
    }
  }
}

StrategyProfile StrategyProfile::uniform(StrategySetting setting, std::size_t node_count, Strategy strategy) {
  return StrategyProfile(setting, std::vector<Strategy>(node_count, strategy));
}

void StrategyProfile::set(NodeId i, Strategy s) {
  if (i >= strategies_.size()) throw IndexError("node " + std::to_string(i) + " out of range");
  if (s.setting() != setting_) throw ParameterError("strategy setting mismatch");
  strategies_[i] = s;
}

std::vector<std::size_t> StrategyProfile::counts() const {
  std::vector<std::size_t> out(strategy_count(setting_), 0);
  for (const auto& s : strategies_) ++out[s.index()];
  return out;
}

bool StrategyProfile::monomorphic() const {
  return std::all_of(strategies_.begin(), strategies_.end(),
                     [&](Strategy s) { return s == strategies_.front(); });
}

}  // namespace mlpgg
