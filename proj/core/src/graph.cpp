#include "ldq/sketch/graph.hpp"

#include <algorithm>
#include <random>

#include "ldq/error.hpp"

namespace ldq::sketch {

StreamedGraph::NodeId StreamedGraph::intern(std::string_view name) {
  auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<NodeId>(adjacency_.size()));
  if (inserted) adjacency_.emplace_back();
  return it->second;
}

void StreamedGraph::add_edge(std::string_view a, std::string_view b) {
  const auto ia = intern(a);
  const auto ib = intern(b);
  add_edge(ia, ib);
}

void StreamedGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) return;
  auto& na = adjacency_[a];
  auto pos = std::lower_bound(na.begin(), na.end(), b);
  if (pos != na.end() && *pos == b) return;
  na.insert(pos, b);
  auto& nb = adjacency_[b];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
  ++edges_;
}

bool StreamedGraph::has_edge(NodeId a, NodeId b) const {
  const auto& na = adjacency_[a];
  return std::binary_search(na.begin(), na.end(), b);
}

double StreamedGraph::local_clustering(NodeId node) const {
  const auto& nbrs = adjacency_[node];
  const auto degree = nbrs.size();
  if (degree < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t i = 0; i < degree; ++i) {
    for (std::size_t j = i + 1; j < degree; ++j) {
      if (has_edge(nbrs[i], nbrs[j])) ++links;
    }
  }
  return static_cast<double>(links) / (static_cast<double>(degree * (degree - 1)) / 2.0);
}

double clustering_coefficient_estimate(const StreamedGraph& graph, std::size_t walk_budget,
                                       std::uint64_t seed, double teleport) {
  const auto n = graph.node_count();
  if (n == 0) throw Error(ErrorCode::empty_graph, "clustering coefficient of an empty graph");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> any_node(0, n - 1);
  std::bernoulli_distribution jump(std::clamp(teleport, 0.0, 1.0));

  std::vector<bool> visited(n, false);
  auto current = static_cast<StreamedGraph::NodeId>(any_node(rng));
  visited[current] = true;
  for (std::size_t step = 0; step < walk_budget; ++step) {
    const auto& nbrs = graph.neighbours(current);
    if (nbrs.empty() || jump(rng)) {
      current = static_cast<StreamedGraph::NodeId>(any_node(rng));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
      current = nbrs[pick(rng)];
    }
    visited[current] = true;
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (StreamedGraph::NodeId v = 0; v < n; ++v) {
    if (!visited[v]) continue;
    sum += graph.local_clustering(v);
    ++count;
  }
  return sum / static_cast<double>(count);
}

}  // namespace ldq::sketch
