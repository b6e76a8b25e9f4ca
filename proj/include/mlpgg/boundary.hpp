#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mlpgg/payoff.hpp"
#include "mlpgg/strategy.hpp"

namespace mlpgg {

inline constexpr std::size_t kPatchSide = 5;

// How cells outside the 5x5 patch are filled when the patch is embedded in a torus.
struct FillRule {
  enum class Kind {
    all_cooperate,
    all_defect,
    fraction,  // deterministic spread with the given cooperator share
    extend,    // copy the nearest patch cell, continuing the patch's boundaries outward
  };
  Kind kind = Kind::all_defect;
  double cooperator_fraction = 0.0;  // used by Kind::fraction
};

std::string to_string(const FillRule& rule);

// Local configuration around a focus player. cells[2][2] is the focus.
struct PatchSpec {
  std::string id;
  std::array<std::array<Strategy, kPatchSide>, kPatchSide> cells{};
  FillRule fill;
  double global_coop_fraction = 0.5;  // cooperators assumed in the global game

  StrategySetting setting() const { return cells[2][2].setting(); }
  Strategy focus() const { return cells[2][2]; }
};

// Builds a patch from five rows of five whitespace-separated labels.
// Errors name the offending row and column (1-based).
PatchSpec parse_patch(const std::string& id, const std::vector<std::string>& rows, FillRule fill,
                      double global_coop_fraction = 0.5);

enum class Direction { left, right, up, down };
inline constexpr std::array<Direction, 4> kDirections = {Direction::left, Direction::right, Direction::up,
                                                          Direction::down};
std::string_view to_string(Direction d);

struct PlayerPayoff {
  double pairwise = 0.0;
  double local = 0.0;
  double global = 0.0;
  double total = 0.0;
};

struct PatchPayoffs {
  PlayerPayoff focus;
  std::array<PlayerPayoff, 4> neighbors;  // kDirections order
};

// The lattice used for embedding: side x side with side * side == population_size, side >= 5.
std::size_t embedding_side(std::size_t population_size);

// Full layout of the embedded patch (focus at row side/2, column side/2).
StrategyProfile embed_patch(const PatchSpec& spec, std::size_t population_size);

// Pairwise and local payoffs come from the embedded lattice; the global pool assumes
// global_coop_fraction * population_size cooperators.
PatchPayoffs patch_payoffs(const PatchSpec& spec, const GameParams& params, std::size_t population_size = 100);

struct ImitationEntry {
  Direction direction;
  Strategy neighbor_strategy;
  double neighbor_payoff;
  double focus_payoff;
  double probability;  // focus copies this neighbor if chosen as target
};

struct ImitationTable {
  Strategy focus_strategy;
  std::array<ImitationEntry, 4> entries;
};

ImitationTable imitation_table(const PatchSpec& spec, const GameParams& params, std::size_t population_size = 100);

struct InvarianceRow {
  double r_global;
  double global_coop_fraction;
  Direction direction;
  double probability;
  double deviation;  // |probability - reference probability|
  bool pass;
};

struct InvarianceReport {
  std::string patch_id;
  ImitationTable reference;  // first r_g value, the spec's own global fraction
  std::vector<InvarianceRow> rows;
  bool all_pass() const;
};

inline constexpr double kInvarianceTolerance = 1e-12;
inline constexpr std::array<double, 5> kGlobalFractionSweep = {0.0, 0.25, 0.5, 0.75, 1.0};

// Recomputes the table for every r_g value crossed with every swept global cooperator fraction
// and compares each probability with the reference table.
InvarianceReport rg_invariance_report(const PatchSpec& spec, const GameParams& params,
                                      const std::vector<double>& rg_values, std::size_t population_size = 100);

}  // namespace mlpgg
