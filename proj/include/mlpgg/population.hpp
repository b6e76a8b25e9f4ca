#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mlpgg {

using NodeId = std::size_t;

enum class Level { pairwise, local, global };

inline constexpr std::array<Level, 3> kLevels = {Level::pairwise, Level::local, Level::global};

struct LatticeDims {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t size() const { return width * height; }
  NodeId index(std::size_t row, std::size_t col) const { return row * width + col; }
  bool operator==(const LatticeDims&) const = default;
};

// Connected, undirected, simple graph. Immutable once built.
class PopulationGraph {
 public:
  // von Neumann torus, row-major indexing. Neighbor order is left, right, up, down.
  static PopulationGraph periodic_lattice(std::size_t width, std::size_t height);

  // Rejects self-loops, duplicate edges, out-of-range endpoints and disconnected graphs.
  static PopulationGraph from_edges(std::size_t node_count,
                                    std::span<const std::pair<NodeId, NodeId>> edges);

  // One "u v" pair per line, 0-based. Blank lines and lines starting with '#' are skipped.
  // The node count is one past the largest index seen.
  static PopulationGraph read_edge_list(const std::filesystem::path& path);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t degree(NodeId i) const { return neighbors(i).size(); }
  std::span<const NodeId> neighbors(NodeId i) const;
  bool adjacent(NodeId i, NodeId j) const;
  const std::optional<LatticeDims>& lattice() const { return lattice_; }

 private:
  PopulationGraph() = default;
  void check_index(NodeId i) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::optional<LatticeDims> lattice_;
};

// {i} followed by the adjacency of i, in adjacency order.
std::vector<NodeId> closed_neighborhood(const PopulationGraph& graph, NodeId i);

// Every game instance a player takes part in, one list per level.
struct ViableGroups {
  std::vector<std::array<NodeId, 2>> pairwise;  // {i, j}, adjacency order
  std::vector<std::vector<NodeId>> local;       // N(j) for j in N(i), i's own first
  std::vector<NodeId> global;                   // 0 .. n-1
  // Some group coincides (as a set) with a group at another level, e.g. on complete graphs.
  bool overlapping = false;
};

ViableGroups viable_groups(const PopulationGraph& graph, NodeId i);

bool induces_connected_subgraph(const PopulationGraph& graph, std::span<const NodeId> nodes);

}  // namespace mlpgg
