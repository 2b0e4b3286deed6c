#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ldq::sketch {

/// Undirected simple graph built on the fly from IRI-to-IRI triples. Nodes are
/// interned to dense ids; self-loops and parallel edges are dropped.
class StreamedGraph {
 public:
  using NodeId = std::uint32_t;

  NodeId intern(std::string_view name);
  void add_edge(std::string_view a, std::string_view b);
  void add_edge(NodeId a, NodeId b);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  /// Sorted neighbour ids.
  const std::vector<NodeId>& neighbours(NodeId node) const { return adjacency_[node]; }
  bool has_edge(NodeId a, NodeId b) const;

  /// Links among neighbours / possible links; 0 for degree < 2.
  double local_clustering(NodeId node) const;

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edges_ = 0;
};

/// Mean local clustering coefficient over the nodes visited by a random walk
/// of `walk_budget` steps from a uniformly chosen start. The walk restarts at
/// a uniformly chosen node when it hits an isolated node and teleports with
/// probability `teleport` per step so every component can be reached.
///
/// Throws Error(empty_graph) for a graph with no nodes.
double clustering_coefficient_estimate(const StreamedGraph& graph, std::size_t walk_budget,
                                       std::uint64_t seed, double teleport = 0.15);

}  // namespace ldq::sketch
