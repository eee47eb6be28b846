#include "dmab/topology.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include "dmab/rng.hpp"

namespace dmab {

namespace {
constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> bfs(const std::vector<std::vector<AgentId>>& adj,
                             AgentId source) {
  std::vector<std::size_t> dist(adj.size(), kUnreached);
  std::queue<AgentId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const AgentId u = frontier.front();
    frontier.pop();
    for (AgentId v : adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<AgentId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  const auto dist = bfs(adj, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == kUnreached; });
}
}  // namespace

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Ring: return "ring";
    case GraphKind::Path: return "path";
    case GraphKind::RingChords: return "ring_chords";
    case GraphKind::ErdosRenyi: return "erdos_renyi";
    case GraphKind::EdgeList: return "edges";
  }
  return "unknown";
}

GraphKind graph_kind_from_string(const std::string& name) {
  for (GraphKind k : {GraphKind::Complete, GraphKind::Ring, GraphKind::Path,
                      GraphKind::RingChords, GraphKind::ErdosRenyi, GraphKind::EdgeList}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown graph generator '" + name + "'");
}

Topology::Topology(std::size_t node_count, const std::vector<Edge>& edges) {
  if (node_count == 0) throw std::invalid_argument("graph must have at least one node");
  std::set<Edge> unique;
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") references a node outside [0," +
                                  std::to_string(node_count) + ")");
    }
    if (u == v) continue;
    unique.insert({std::min(u, v), std::max(u, v)});
  }
  adjacency_.assign(node_count, {});
  for (auto [u, v] : unique) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
  edge_count_ = unique.size();

  distance_.assign(node_count * node_count, 0);
  for (AgentId s = 0; s < node_count; ++s) {
    const auto dist = bfs(adjacency_, s);
    for (AgentId t = 0; t < node_count; ++t) {
      if (dist[t] == kUnreached) {
        throw std::invalid_argument("graph is disconnected: node " + std::to_string(t) +
                                    " is unreachable from node " + std::to_string(s));
      }
      distance_[s * node_count + t] = dist[t];
      diameter_ = std::max(diameter_, dist[t]);
    }
  }
}

std::vector<Edge> Topology::edges() const {
  std::vector<Edge> out;
  for (AgentId u = 0; u < node_count(); ++u) {
    for (AgentId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Topology build_graph(const GraphSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.nodes;
  if (n == 0) throw std::invalid_argument("graph.nodes must be >= 1");
  std::vector<Edge> edges;
  switch (spec.kind) {
    case GraphKind::Complete:
      for (AgentId u = 0; u < n; ++u)
        for (AgentId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
      break;
    case GraphKind::Ring:
      for (AgentId u = 0; n > 1 && u < n; ++u) edges.emplace_back(u, (u + 1) % n);
      break;
    case GraphKind::Path:
      for (AgentId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
      break;
    case GraphKind::RingChords: {
      const std::size_t offset = spec.chord_offset == 0 ? n / 2 : spec.chord_offset;
      for (AgentId u = 0; n > 1 && u < n; ++u) {
        edges.emplace_back(u, (u + 1) % n);
        edges.emplace_back(u, (u + offset) % n);
      }
      break;
    }
    case GraphKind::ErdosRenyi: {
      if (spec.edge_probability < 0.0 || spec.edge_probability > 1.0)
        throw std::invalid_argument("graph.p must lie in [0,1]");
      RngStream rng(derive_seed(seed, 0, StreamRole::Topology));
      for (std::size_t attempt = 0; attempt < spec.max_retries; ++attempt) {
        edges.clear();
        for (AgentId u = 0; u < n; ++u)
          for (AgentId v = u + 1; v < n; ++v)
            if (rng.bernoulli(spec.edge_probability)) edges.emplace_back(u, v);
        if (is_connected(n, edges)) return Topology(n, edges);
      }
      throw std::invalid_argument("Erdos-Renyi graph still disconnected after " +
                                  std::to_string(spec.max_retries) + " retries");
    }
    case GraphKind::EdgeList:
      edges = spec.edges;
      break;
  }
  return Topology(n, edges);
}

bool NeighborhoodStats::contains(AgentId i, AgentId j) const {
  const auto& hood = neighborhoods[i];
  return std::binary_search(hood.begin(), hood.end(), j);
}

NeighborhoodStats neighborhood_stats(const Topology& topology, std::size_t w) {
  const std::size_t n = topology.node_count();
  NeighborhoodStats stats;
  stats.w = w;
  stats.neighborhoods.resize(n);
  stats.sizes.resize(n);
  stats.local_min.resize(n);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = 0; j < n; ++j) {
      if (topology.distance(i, j) <= w) stats.neighborhoods[i].push_back(j);
    }
    stats.sizes[i] = stats.neighborhoods[i].size();
  }
  stats.global_min = *std::min_element(stats.sizes.begin(), stats.sizes.end());
  for (AgentId i = 0; i < n; ++i) {
    std::size_t m = stats.sizes[i];
    for (AgentId j : stats.neighborhoods[i]) m = std::min(m, stats.sizes[j]);
    stats.local_min[i] = m;
  }
  return stats;
}

NeighborhoodStats self_only_stats(std::size_t node_count) {
  NeighborhoodStats stats;
  stats.w = 0;
  stats.neighborhoods.resize(node_count);
  for (AgentId i = 0; i < node_count; ++i) stats.neighborhoods[i] = {i};
  stats.sizes.assign(node_count, 1);
  stats.local_min.assign(node_count, 1);
  stats.global_min = node_count == 0 ? 0 : 1;
  return stats;
}

}  // namespace dmab
