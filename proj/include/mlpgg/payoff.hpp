#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlpgg/population.hpp"
#include "mlpgg/strategy.hpp"

namespace mlpgg {

struct GameParams {
  double r_pairwise = 1.6;
  double r_local = 4.0;
  double r_global = 5.0;
  double sigma = 1.0;  // share of each per-game endowment a cooperator stakes
  double beta = 0.5;   // selection strength
  double mu = 0.0;     // mutation probability

  double rate(Level level) const;
  // Throws ParameterError when any field is out of range.
  void validate() const;
};

// Per-player payoffs split by level. total[i] == pairwise[i] + local[i] + global[i].
struct PayoffVector {
  std::vector<double> pairwise;
  std::vector<double> local;
  std::vector<double> global;
  std::vector<double> total;

  std::size_t size() const { return total.size(); }
  double at(Level level, NodeId i) const;
};

// Payoff of each member of one public goods game: o_i - s_i + (r / |V|) * sum_j s_j.
// The three spans are aligned with each other.
std::vector<double> game_payoff(std::span<const double> contributions, std::span<const double> endowments,
                                double rate);

// Single global game with full unit endowment: 1 - s_i + (r / n) * sum_j s_j.
std::vector<double> pgg_reference_payoff(std::span<const double> contributions, double rate);

// Endowment a player brings to each game of a level: 1/3 split evenly over that level's groups.
double per_game_endowment(const PopulationGraph& graph, NodeId i, Level level);

// i's payoff summed over the games of one level, evaluated group by group.
double level_payoff(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params,
                    NodeId i, Level level);

// Evaluates every game instance of a graph once per call and credits shares to members.
// Instance lists and endowments are built once, so one engine serves a whole run.
class PayoffEngine {
 public:
  explicit PayoffEngine(const PopulationGraph& graph);

  const PopulationGraph& graph() const { return *graph_; }
  PayoffVector compute(const StrategyProfile& profile, const GameParams& params) const;
  // Same as compute but writes into out, reusing its buffers.
  void compute_into(const StrategyProfile& profile, const GameParams& params, PayoffVector& out) const;

 private:
  const PopulationGraph* graph_;
  std::vector<std::array<NodeId, 2>> edges_;  // u < v
  std::vector<double> pairwise_endowment_;
  std::vector<double> local_endowment_;
};

PayoffVector total_payoffs(const PopulationGraph& graph, const StrategyProfile& profile, const GameParams& params);

}  // namespace mlpgg
