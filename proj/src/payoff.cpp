#include "mlpgg/payoff.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mlpgg/errors.hpp"

namespace mlpgg {

double GameParams::rate(Level level) const {
  switch (level) {
    case Level::pairwise: return r_pairwise;
    case Level::local: return r_local;
    case Level::global: return r_global;
  }
  return 0.0;
}

void GameParams::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
  };
  require(std::isfinite(r_pairwise) && r_pairwise >= 0.0, "r_p must be finite and >= 0");
  require(std::isfinite(r_local) && r_local >= 0.0, "r_l must be finite and >= 0");
  require(std::isfinite(r_global) && r_global >= 0.0, "r_g must be finite and >= 0");
  require(sigma > 0.0 && sigma <= 1.0, "sigma must lie in (0, 1]");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(mu >= 0.0 && mu <= 1.0, "mu must lie in [0, 1]");
}

double PayoffVector::at(Level level, NodeId i) const {
  switch (level) {
    case Level::pairwise: return pairwise.at(i);
    case Level::local: return local.at(i);
    case Level::global: return global.at(i);
  }
  return 0.0;
}

std::vector<double> game_payoff(std::span<const double> contributions, std::span<const double> endowments,
                                double rate) {
  if (contributions.size() != endowments.size()) {
    throw DomainError("contributions and endowments differ in length");
  }
  if (contributions.size() < 2) throw DomainError("a public goods game needs at least two players");
  double pot = 0.0;
  for (std::size_t k = 0; k < contributions.size(); ++k) {
    if (contributions[k] < 0.0 || contributions[k] > endowments[k]) {
      throw DomainError("contribution " + std::to_string(contributions[k]) + " outside [0, endowment " +
                        std::to_string(endowments[k]) + "]");
    }
    pot += contributions[k];
  }
  const double share = rate / static_cast<double>(contributions.size()) * pot;
  std::vector<double> out(contributions.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = endowments[k] - contributions[k] + share;
  return out;
}

std::vector<double> pgg_reference_payoff(std::span<const double> contributions, double rate) {
  std::vector<double> endowments(contributions.size(), 1.0);
  return game_payoff(contributions, endowments, rate);
}

double per_game_endowment(const PopulationGraph& graph, NodeId i, Level level) {
  switch (level) {
    case Level::pairwise: return 1.0 / (3.0 * static_cast<double>(graph.degree(i)));
    case Level::local: return 1.0 / (3.0 * static_cast<double>(graph.degree(i) + 1));
    case Level::global: return 1.0 / 3.0;
  }
  return 0.0;
}

namespace {

double stake(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params, NodeId j,
             Level level) {
  return params.sigma * per_game_endowment(graph, j, level) * (profile[j].cooperates(level) ? 1.0 : 0.0);
}

double share_of(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params,
                std::span<const NodeId> group, NodeId i, Level level) {
  std::vector<double> s, o;
  std::size_t self = 0;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (group[k] == i) self = k;
    s.push_back(stake(graph, profile, params, group[k], level));
    o.push_back(per_game_endowment(graph, group[k], level));
  }
  return game_payoff(s, o, params.rate(level))[self];
}

}  // namespace

double level_payoff(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params,
                    NodeId i, Level level) {
  if (profile.size() != graph.node_count()) throw ParameterError("profile does not cover the graph");
  const auto groups = viable_groups(graph, i);
  double sum = 0.0;
  switch (level) {
    case Level::pairwise:
      for (const auto& pair : groups.pairwise) sum += share_of(graph, profile, params, pair, i, level);
      break;
    case Level::local:
      for (const auto& local : groups.local) sum += share_of(graph, profile, params, local, i, level);
      break;
    case Level::global:
      sum = share_of(graph, profile, params, groups.global, i, level);
      break;
  }
  return sum;
}

PayoffEngine::PayoffEngine(const PopulationGraph& graph) : graph_(&graph) {
  const std::size_t n = graph.node_count();
  pairwise_endowment_.resize(n);
  local_endowment_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    pairwise_endowment_[i] = per_game_endowment(graph, i, Level::pairwise);
    local_endowment_[i] = per_game_endowment(graph, i, Level::local);
    for (NodeId j : graph.neighbors(i)) {
      if (i < j) edges_.push_back({i, j});
    }
  }
}

PayoffVector PayoffEngine::compute(const StrategyProfile& profile, const GameParams& params) const {
  PayoffVector out;
  compute_into(profile, params, out);
  return out;
}

void PayoffEngine::compute_into(const StrategyProfile& profile, const GameParams& params,
                                PayoffVector& out) const {
  const auto& graph = *graph_;
  const std::size_t n = graph.node_count();
  if (profile.size() != n) throw ParameterError("profile does not cover the graph");
  if (n < 2) throw DomainError("a public goods game needs at least two players");

  out.pairwise.assign(n, 0.0);
  out.local.assign(n, 0.0);
  out.global.assign(n, 0.0);
  out.total.resize(n);

  const double sigma = params.sigma;
  // Stakes of cooperators; defectors stake nothing.
  thread_local std::vector<double> s_pair, s_local;
  s_pair.resize(n);
  s_local.resize(n);
  double global_pot = 0.0;
  const double global_endowment = 1.0 / 3.0;
  const double global_stake = sigma * global_endowment;
  for (NodeId i = 0; i < n; ++i) {
    const Strategy s = profile[i];
    s_pair[i] = s.cooperates(Level::pairwise) ? sigma * pairwise_endowment_[i] : 0.0;
    s_local[i] = s.cooperates(Level::local) ? sigma * local_endowment_[i] : 0.0;
    if (s.cooperates(Level::global)) global_pot += global_stake;
  }

  const double pair_factor = params.r_pairwise / 2.0;
  for (auto [u, v] : edges_) {
    const double share = pair_factor * (s_pair[u] + s_pair[v]);
    out.pairwise[u] += pairwise_endowment_[u] - s_pair[u] + share;
    out.pairwise[v] += pairwise_endowment_[v] - s_pair[v] + share;
  }

  for (NodeId center = 0; center < n; ++center) {
    auto adj = graph.neighbors(center);
    double pot = s_local[center];
    for (NodeId j : adj) pot += s_local[j];
    const double share = params.r_local / static_cast<double>(adj.size() + 1) * pot;
    out.local[center] += local_endowment_[center] - s_local[center] + share;
    for (NodeId j : adj) out.local[j] += local_endowment_[j] - s_local[j] + share;
  }

  const double global_share = params.r_global / static_cast<double>(n) * global_pot;
  for (NodeId i = 0; i < n; ++i) {
    const double s = profile[i].cooperates(Level::global) ? global_stake : 0.0;
    out.global[i] = global_endowment - s + global_share;
    out.total[i] = out.pairwise[i] + out.local[i] + out.global[i];
  }
}

PayoffVector total_payoffs(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params) {
  return PayoffEngine(graph).compute(profile, params);
}

}  // namespace mlpgg
