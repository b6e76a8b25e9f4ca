#include "mlpgg/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlpgg/dynamics.hpp"
#include "mlpgg/errors.hpp"

namespace mlpgg {

std::string to_string(const FillRule& rule) {
  switch (rule.kind) {
    case FillRule::Kind::all_cooperate: return "all_C";
    case FillRule::Kind::all_defect: return "all_D";
    case FillRule::Kind::extend: return "extend";
    case FillRule::Kind::fraction: {
      std::ostringstream os;
      os << "fraction(" << rule.cooperator_fraction << ")";
      return os.str();
    }
  }
  return "";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::left: return "left";
    case Direction::right: return "right";
    case Direction::up: return "up";
    case Direction::down: return "down";
  }
  return "";
}

PatchSpec parse_patch(const std::string& id, const std::vector<std::string>& rows, FillRule fill,
                      double global_coop_fraction) {
  if (rows.size() != kPatchSide) {
    throw ParseError("patch '" + id + "': expected 5 rows, got " + std::to_string(rows.size()));
  }
  if (fill.kind == FillRule::Kind::fraction && !(fill.cooperator_fraction >= 0.0 && fill.cooperator_fraction <= 1.0)) {
    throw ParseError("patch '" + id + "': fill fraction must lie in [0, 1]");
  }
  if (!(global_coop_fraction >= 0.0 && global_coop_fraction <= 1.0)) {
    throw ParseError("patch '" + id + "': global_coop_fraction must lie in [0, 1]");
  }
  PatchSpec spec;
  spec.id = id;
  spec.fill = fill;
  spec.global_coop_fraction = global_coop_fraction;
  for (std::size_t r = 0; r < kPatchSide; ++r) {
    std::istringstream fields(rows[r]);
    std::string label;
    std::size_t c = 0;
    while (fields >> label) {
      const std::string where = "patch '" + id + "' row " + std::to_string(r + 1) + " column " + std::to_string(c + 1);
      if (c >= kPatchSide) throw ParseError(where + ": more than 5 labels");
      try {
        spec.cells[r][c] = parse_strategy_label(label);
      } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
      }
      if (spec.cells[r][c].setting() != spec.cells[0][0].setting()) {
        throw ParseError(where + ": label '" + label + "' mixes binary and level-based strategies");
      }
      ++c;
    }
    if (c != kPatchSide) {
      throw ParseError("patch '" + id + "' row " + std::to_string(r + 1) + ": expected 5 labels, got " +
                       std::to_string(c));
    }
  }
  return spec;
}

std::size_t embedding_side(std::size_t population_size) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(population_size))));
  if (side * side != population_size || side < kPatchSide) {
    throw ParameterError("population size " + std::to_string(population_size) +
                         " must be a square of a side >= 5 to embed a 5x5 patch");
  }
  return side;
}

namespace {

// Offset of a coordinate from the focus on a torus, in (-side/2, side/2].
long signed_offset(std::size_t coord, std::size_t focus, std::size_t side) {
  const auto raw = static_cast<long>((coord + side - focus) % side);
  return raw <= static_cast<long>(side - 1) / 2 ? raw : raw - static_cast<long>(side);
}

}  // namespace

StrategyProfile embed_patch(const PatchSpec& spec, std::size_t population_size) {
  const std::size_t side = embedding_side(population_size);
  const std::size_t focus = side / 2;
  const auto setting = spec.setting();
  const auto cooperator = Strategy::all_cooperate(setting);
  const auto defector = Strategy::all_defect(setting);
  constexpr long half = kPatchSide / 2;

  std::vector<Strategy> cells(side * side);
  std::size_t outside = 0;
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const long dr = signed_offset(row, focus, side);
      const long dc = signed_offset(col, focus, side);
      auto& cell = cells[row * side + col];
      if (std::abs(dr) <= half && std::abs(dc) <= half) {
        cell = spec.cells[dr + half][dc + half];
        continue;
      }
      switch (spec.fill.kind) {
        case FillRule::Kind::all_cooperate: cell = cooperator; break;
        case FillRule::Kind::all_defect: cell = defector; break;
        case FillRule::Kind::extend:
          cell = spec.cells[std::clamp(dr, -half, half) + half][std::clamp(dc, -half, half) + half];
          break;
        case FillRule::Kind::fraction: {
          // Cell k is a cooperator when floor((k + 1) f) steps past floor(k f).
          const double f = spec.fill.cooperator_fraction;
          const double k = static_cast<double>(outside);
          cell = std::floor((k + 1.0) * f) > std::floor(k * f) ? cooperator : defector;
          break;
        }
      }
      ++outside;
    }
  }
  return StrategyProfile(setting, std::move(cells));
}

PatchPayoffs patch_payoffs(const PatchSpec& spec, const GameParams& params, std::size_t population_size) {
  params.validate();
  const std::size_t side = embedding_side(population_size);
  const auto graph = PopulationGraph::periodic_lattice(side, side);
  const auto profile = embed_patch(spec, population_size);
  const auto pay = PayoffEngine(graph).compute(profile, params);

  const double n = static_cast<double>(population_size);
  const double global_stake = params.sigma / 3.0;
  const double pooled = params.r_global / n * (spec.global_coop_fraction * n * global_stake);
  auto player = [&](NodeId i) {
    PlayerPayoff p;
    p.pairwise = pay.pairwise[i];
    p.local = pay.local[i];
    p.global = 1.0 / 3.0 - (profile[i].cooperates(Level::global) ? global_stake : 0.0) + pooled;
    p.total = p.pairwise + p.local + p.global;
    return p;
  };

  const std::size_t c = side / 2;
  const auto neighbors = graph.neighbors(c * side + c);  // left, right, up, down
  PatchPayoffs out;
  out.focus = player(c * side + c);
  for (std::size_t k = 0; k < 4; ++k) out.neighbors[k] = player(neighbors[k]);
  return out;
}

ImitationTable imitation_table(const PatchSpec& spec, const GameParams& params, std::size_t population_size) {
  const auto pay = patch_payoffs(spec, params, population_size);
  static constexpr std::array<std::array<std::size_t, 2>, 4> cell = {{{2, 1}, {2, 3}, {1, 2}, {3, 2}}};
  ImitationTable table;
  table.focus_strategy = spec.focus();
  for (std::size_t k = 0; k < 4; ++k) {
    const double focus = pay.focus.total;
    const double neighbor = pay.neighbors[k].total;
    table.entries[k] = {kDirections[k], spec.cells[cell[k][0]][cell[k][1]], neighbor, focus,
                        imitation_probability(focus, neighbor, params.beta)};
  }
  return table;
}

bool InvarianceReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const InvarianceRow& r) { return r.pass; });
}

InvarianceReport rg_invariance_report(const PatchSpec& spec, const GameParams& params,
                                      const std::vector<double>& rg_values, std::size_t population_size) {
  if (rg_values.size() < 2) throw ParameterError("invariance report needs at least two r_g values");
  InvarianceReport report;
  report.patch_id = spec.id;
  GameParams base = params;
  base.r_global = rg_values.front();
  report.reference = imitation_table(spec, base, population_size);

  for (double rg : rg_values) {
    for (double fraction : kGlobalFractionSweep) {
      GameParams p = params;
      p.r_global = rg;
      PatchSpec variant = spec;
      variant.global_coop_fraction = fraction;
      const auto table = imitation_table(variant, p, population_size);
      for (std::size_t k = 0; k < 4; ++k) {
        const double dev = std::abs(table.entries[k].probability - report.reference.entries[k].probability);
        report.rows.push_back({rg, fraction, kDirections[k], table.entries[k].probability, dev,
                               dev <= kInvarianceTolerance});
      }
    }
  }
  return report;
}

}  // namespace mlpgg
