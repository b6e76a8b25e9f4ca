#include "mlpgg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlpgg/errors.hpp"

namespace mlpgg {

double imitation_probability(double focus_payoff, double target_payoff, double beta) {
  const double x = beta * (focus_payoff - target_payoff);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

std::string_view to_string(TargetMode mode) {
  return mode == TargetMode::neighbor ? "neighbor" : "population";
}

TargetMode parse_target_mode(std::string_view text) {
  if (text == "neighbor") return TargetMode::neighbor;
  if (text == "population") return TargetMode::population;
  throw ParseError("unknown target mode '" + std::string(text) + "'");
}

std::string_view to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::absorbed: return "absorbed";
    case TerminalKind::round_cap_reached: return "round_cap_reached";
    case TerminalKind::frequency_stable: return "frequency_stable";
  }
  return "";
}

TerminalKind parse_terminal_kind(std::string_view text) {
  for (auto k : {TerminalKind::absorbed, TerminalKind::round_cap_reached, TerminalKind::frequency_stable}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError("unknown terminal status '" + std::string(text) + "'");
}

Simulator::Simulator(const PopulationGraph& graph, GameParams params, TargetMode target)
    : graph_(&graph), params_(params), target_(target), engine_(graph) {
  params_.validate();
  if (target_ == TargetMode::population && graph.node_count() < 2) {
    throw ParameterError("population-wide targets need at least two players");
  }
}

void Simulator::step(SimulationState& state) {
  const auto& graph = *graph_;
  const std::size_t n = graph.node_count();
  auto& profile = state.profile;
  auto& rng = state.rng;

  engine_.compute_into(profile, params_, payoffs_);

  targets_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    if (target_ == TargetMode::neighbor) {
      auto adj = graph.neighbors(i);
      targets_[i] = adj[rng.below(adj.size())];
    } else {
      NodeId j = rng.below(n - 1);
      targets_[i] = j >= i ? j + 1 : j;
    }
  }

  // Imitation draws are consumed for every player, even when the target shares its strategy.
  std::vector<Strategy> next(profile.strategies().begin(), profile.strategies().end());
  for (NodeId i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const NodeId j = targets_[i];
    if (profile[j] == profile[i]) continue;
    if (u < imitation_probability(payoffs_.total[i], payoffs_.total[j], params_.beta)) next[i] = profile[j];
  }

  if (params_.mu > 0.0) {
    const auto setting = profile.setting();
    const auto types = strategy_count(setting);
    for (NodeId i = 0; i < n; ++i) {
      if (rng.uniform() < params_.mu) next[i] = Strategy::from_index(setting, rng.below(types));
    }
  }

  for (NodeId i = 0; i < n; ++i) profile.set(i, next[i]);
  ++state.round;
}

SimulationState step(const SimulationState& state, const PopulationGraph& graph, const GameParams& params,
                     TargetMode target) {
  SimulationState next = state;
  Simulator(graph, params, target).step(next);
  return next;
}

Trajectory::Trajectory(StrategySetting setting, std::size_t node_count)
    : setting_(setting), node_count_(node_count) {}

std::span<const std::uint32_t> Trajectory::counts_at(std::size_t round) const {
  if (round >= rows()) throw IndexError("round " + std::to_string(round) + " not recorded");
  return std::span<const std::uint32_t>(counts_).subspan(round * types(), types());
}

double Trajectory::frequency(std::size_t round, std::size_t type) const {
  return static_cast<double>(counts_at(round)[type]) / static_cast<double>(node_count_);
}

void Trajectory::record(const StrategyProfile& profile) {
  for (auto c : profile.counts()) counts_.push_back(static_cast<std::uint32_t>(c));
}

void Trajectory::add_snapshot(std::size_t round, StrategyProfile profile) {
  snapshots_.emplace_back(round, std::move(profile));
}

Trajectory run(const PopulationGraph& graph, const StrategyProfile& initial, const GameParams& params,
               const StopCriteria& stop, std::uint64_t seed, TargetMode target) {
  if (stop.max_rounds < 1) throw ParameterError("max_rounds must be at least 1");
  if (initial.size() != graph.node_count()) throw ParameterError("initial profile does not cover the graph");

  Simulator sim(graph, params, target);
  SimulationState state{0, initial, Rng(seed)};
  Trajectory traj(initial.setting(), graph.node_count());

  auto wants_snapshot = [&](std::size_t round) {
    return std::find(stop.snapshot_rounds.begin(), stop.snapshot_rounds.end(), round) !=
           stop.snapshot_rounds.end();
  };
  auto absorbed = [&] { return params.mu == 0.0 && state.profile.monomorphic(); };

  traj.record(state.profile);
  if (wants_snapshot(0)) traj.add_snapshot(0, state.profile);

  TerminalStatus status;
  std::size_t unchanged = 0;
  if (absorbed()) {
    status = {TerminalKind::absorbed, state.profile[0]};
  } else {
    while (true) {
      sim.step(state);
      traj.record(state.profile);
      if (wants_snapshot(state.round)) traj.add_snapshot(state.round, state.profile);

      const auto now = traj.counts_at(state.round);
      const auto before = traj.counts_at(state.round - 1);
      unchanged = std::equal(now.begin(), now.end(), before.begin()) ? unchanged + 1 : 0;

      if (absorbed()) {
        status = {TerminalKind::absorbed, state.profile[0]};
        break;
      }
      if (stop.stability_window > 0 && unchanged >= stop.stability_window) {
        status = {TerminalKind::frequency_stable, std::nullopt};
        break;
      }
      if (state.round >= stop.max_rounds) {
        status = {TerminalKind::round_cap_reached, std::nullopt};
        break;
      }
    }
  }
  traj.set_status(status);
  traj.set_final_profile(std::move(state.profile));
  return traj;
}

StrategySetting setting_of(const InitSpec& spec) {
  if (auto* u = std::get_if<UniformRandomInit>(&spec)) return u->setting;
  if (auto* f = std::get_if<FixedFractionInit>(&spec)) return f->setting;
  const auto& e = std::get<ExplicitInit>(spec);
  if (e.strategies.empty()) throw ParameterError("explicit profile is empty");
  return e.strategies.front().setting();
}

StrategyProfile initialize_profile(const PopulationGraph& graph, const InitSpec& spec, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  Rng rng(seed);

  if (auto* uniform = std::get_if<UniformRandomInit>(&spec)) {
    std::vector<Strategy> s(n);
    const auto types = strategy_count(uniform->setting);
    for (auto& x : s) x = Strategy::from_index(uniform->setting, rng.below(types));
    return StrategyProfile(uniform->setting, std::move(s));
  }

  if (auto* fixed = std::get_if<FixedFractionInit>(&spec)) {
    double sum = 0.0;
    for (const auto& [strategy, f] : fixed->fractions) {
      if (strategy.setting() != fixed->setting) throw ParameterError("fraction for a strategy of another setting");
      if (!(f >= 0.0)) throw ParameterError("fractions must be non-negative");
      sum += f;
    }
    if (fixed->fractions.empty() || std::abs(sum - 1.0) > 1e-9) {
      throw ParameterError("initial fractions must sum to 1, got " + std::to_string(sum));
    }
    // Largest remainder; ties broken by listing order.
    std::vector<std::size_t> count(fixed->fractions.size());
    std::vector<std::pair<double, std::size_t>> remainder;
    std::size_t placed = 0;
    for (std::size_t k = 0; k < count.size(); ++k) {
      const double exact = fixed->fractions[k].second * static_cast<double>(n);
      count[k] = static_cast<std::size_t>(std::floor(exact));
      placed += count[k];
      remainder.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainder.begin(), remainder.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; placed < n && k < remainder.size(); ++k, ++placed) ++count[remainder[k].second];

    std::vector<Strategy> s;
    s.reserve(n);
    for (std::size_t k = 0; k < count.size(); ++k) s.insert(s.end(), count[k], fixed->fractions[k].first);
    s.resize(n, fixed->fractions.back().first);
    for (std::size_t k = n; k > 1; --k) std::swap(s[k - 1], s[rng.below(k)]);
    return StrategyProfile(fixed->setting, std::move(s));
  }

  const auto& e = std::get<ExplicitInit>(spec);
  if (e.strategies.size() != n) {
    throw ParameterError("explicit profile has " + std::to_string(e.strategies.size()) + " entries for " +
                         std::to_string(n) + " nodes");
  }
  return StrategyProfile(setting_of(spec), e.strategies);
}

}  // namespace mlpgg
