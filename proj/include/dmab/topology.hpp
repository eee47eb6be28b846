#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dmab {

using AgentId = std::size_t;
using Edge = std::pair<AgentId, AgentId>;

enum class GraphKind { Complete, Ring, Path, RingChords, ErdosRenyi, EdgeList };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

/// How to build the agent graph.
struct GraphSpec {
  GraphKind kind = GraphKind::Complete;
  std::size_t nodes = 1;
  double edge_probability = 0.5;   // ErdosRenyi
  std::size_t chord_offset = 0;    // RingChords; 0 means nodes / 2
  std::size_t max_retries = 1000;  // ErdosRenyi connectivity retries
  std::vector<Edge> edges;         // EdgeList

  bool operator==(const GraphSpec&) const = default;
};

/// Undirected connected graph with all-pairs hop distances.
class Topology {
 public:
  /// Throws std::invalid_argument if the graph is disconnected or an edge is
  /// out of range. Self loops and duplicate edges are dropped.
  Topology(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t diameter() const { return diameter_; }
  std::size_t distance(AgentId u, AgentId v) const {
    return distance_[u * node_count() + v];
  }
  const std::vector<AgentId>& neighbors(AgentId u) const { return adjacency_[u]; }
  std::vector<Edge> edges() const;

 private:
  std::vector<std::vector<AgentId>> adjacency_;
  std::vector<std::size_t> distance_;
  std::size_t edge_count_ = 0;
  std::size_t diameter_ = 0;
};

/// Builds the graph named by `spec`. `seed` drives the Erdos-Renyi sampler only.
Topology build_graph(const GraphSpec& spec, std::uint64_t seed = 0);

/// w-neighborhoods and the minimum-size quantities derived from them.
struct NeighborhoodStats {
  std::size_t w = 0;
  std::vector<std::vector<AgentId>> neighborhoods;  // sorted ascending
  std::vector<std::size_t> sizes;                   // |N_w(i)|
  std::vector<std::size_t> local_min;               // min_{j in N_w(i)} |N_w(j)|
  std::size_t global_min = 0;                       // min_j |N_w(j)|

  bool contains(AgentId i, AgentId j) const;
};

NeighborhoodStats neighborhood_stats(const Topology& topology, std::size_t w);

/// Stats an agent would see if it collaborated with nobody (w = 0).
NeighborhoodStats self_only_stats(std::size_t node_count);

}  // namespace dmab
