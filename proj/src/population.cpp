#include "mlpgg/population.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "mlpgg/errors.hpp"

namespace mlpgg {

PopulationGraph PopulationGraph::periodic_lattice(std::size_t width, std::size_t height) {
  if (width < 3 || height < 3) {
    throw ParameterError("periodic lattice needs width >= 3 and height >= 3, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  PopulationGraph g;
  LatticeDims dims{width, height};
  g.lattice_ = dims;
  g.adjacency_.resize(dims.size());
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      auto& adj = g.adjacency_[dims.index(row, col)];
      adj.reserve(4);
      adj.push_back(dims.index(row, (col + width - 1) % width));
      adj.push_back(dims.index(row, (col + 1) % width));
      adj.push_back(dims.index((row + height - 1) % height, col));
      adj.push_back(dims.index((row + 1) % height, col));
    }
  }
  return g;
}

PopulationGraph PopulationGraph::from_edges(std::size_t node_count,
                                            std::span<const std::pair<NodeId, NodeId>> edges) {
  if (node_count == 0) throw ParameterError("graph must have at least one node");
  PopulationGraph g;
  g.adjacency_.resize(node_count);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw IndexError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") out of range for " + std::to_string(node_count) + " nodes");
    }
    if (u == v) throw ParameterError("self-loop at node " + std::to_string(u));
    auto& au = g.adjacency_[u];
    if (std::find(au.begin(), au.end(), v) != au.end()) {
      throw ParameterError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    au.push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::vector<NodeId> all(node_count);
  for (std::size_t i = 0; i < node_count; ++i) all[i] = i;
  if (!induces_connected_subgraph(g, all)) throw ParameterError("population graph is not connected");
  return g;
}

PopulationGraph PopulationGraph::read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list " + path.string());
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(fields >> u >> v) || u < 0 || v < 0 || (fields >> rest)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected \"u v\"");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_index = std::max({max_index, static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  if (edges.empty()) throw ParseError(path.string() + ": no edges");
  return from_edges(max_index + 1, edges);
}

void PopulationGraph::check_index(NodeId i) const {
  if (i >= adjacency_.size()) {
    throw IndexError("node " + std::to_string(i) + " out of range for " +
                     std::to_string(adjacency_.size()) + " nodes");
  }
}

std::span<const NodeId> PopulationGraph::neighbors(NodeId i) const {
  check_index(i);
  return adjacency_[i];
}

bool PopulationGraph::adjacent(NodeId i, NodeId j) const {
  auto adj = neighbors(i);
  return std::find(adj.begin(), adj.end(), j) != adj.end();
}

std::vector<NodeId> closed_neighborhood(const PopulationGraph& graph, NodeId i) {
  auto adj = graph.neighbors(i);
  std::vector<NodeId> out;
  out.reserve(adj.size() + 1);
  out.push_back(i);
  out.insert(out.end(), adj.begin(), adj.end());
  return out;
}

namespace {

std::vector<NodeId> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

ViableGroups viable_groups(const PopulationGraph& graph, NodeId i) {
  ViableGroups groups;
  auto adj = graph.neighbors(i);
  for (NodeId j : adj) groups.pairwise.push_back({i, j});
  groups.local.push_back(closed_neighborhood(graph, i));
  for (NodeId j : adj) groups.local.push_back(closed_neighborhood(graph, j));
  groups.global.resize(graph.node_count());
  for (std::size_t k = 0; k < graph.node_count(); ++k) groups.global[k] = k;

  // Level overlap: a local group that is the whole population, or a pair that is a local group.
  for (const auto& local : groups.local) {
    if (local.size() == graph.node_count()) groups.overlapping = true;
    if (local.size() == 2) {
      auto s = sorted(local);
      for (auto [a, b] : groups.pairwise) {
        if (sorted({a, b}) == s) groups.overlapping = true;
      }
    }
  }
  if (graph.node_count() == 2) groups.overlapping = true;
  return groups;
}

bool induces_connected_subgraph(const PopulationGraph& graph, std::span<const NodeId> nodes) {
  if (nodes.empty()) return false;
  std::vector<NodeId> members(nodes.begin(), nodes.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  auto in_set = [&](NodeId k) { return std::binary_search(members.begin(), members.end(), k); };

  std::vector<NodeId> stack{members.front()};
  std::vector<NodeId> seen{members.front()};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : graph.neighbors(u)) {
      if (in_set(v) && std::find(seen.begin(), seen.end(), v) == seen.end()) {
        seen.push_back(v);
        stack.push_back(v);
      }
    }
  }
  return seen.size() == members.size();
}

}  // namespace mlpgg
