#include "bgap/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace bgap {

MultiGraph MultiGraph::build(int n, std::span<const Edge> edges) {
  if (n < 0) throw std::invalid_argument("build_graph: negative vertex count");

  std::vector<Edge> normalized;
  normalized.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw std::invalid_argument("build_graph: edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") out of range for n = " +
                                  std::to_string(n));
    }
    if (e.multiplicity <= 0) {
      throw std::invalid_argument("build_graph: edge multiplicity must be >= 1");
    }
    normalized.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.multiplicity});
  }
  std::sort(normalized.begin(), normalized.end());

  MultiGraph g;
  g.n_ = n;
  for (const Edge& e : normalized) {
    if (!g.edges_.empty() && g.edges_.back().u == e.u && g.edges_.back().v == e.v) {
      g.edges_.back().multiplicity += e.multiplicity;
    } else {
      g.edges_.push_back(e);
    }
  }

  const auto un = static_cast<std::size_t>(n);
  g.degree_.assign(un, 0);
  g.loops_.assign(un, 0);
  g.adjacency_.assign(un, {});
  for (const Edge& e : g.edges_) {
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    if (e.u == e.v) {
      g.degree_[u] += 2 * e.multiplicity;
      g.loops_[u] += e.multiplicity;
    } else {
      g.degree_[u] += e.multiplicity;
      g.degree_[v] += e.multiplicity;
      g.adjacency_[u].push_back({e.v, e.multiplicity});
      g.adjacency_[v].push_back({e.u, e.multiplicity});
    }
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  g.max_degree_ = n == 0 ? 0 : *std::max_element(g.degree_.begin(), g.degree_.end());

  if (n > 0) {
    const auto dist = bfs_distances(g, 0);
    g.connected_ = std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
  }
  return g;
}

int MultiGraph::plain_degree(int v) const { return degree(v) - 2 * loops_at(v); }

double MultiGraph::average_degree() const {
  if (n_ == 0) return 0.0;
  return static_cast<double>(oriented_edge_count()) / static_cast<double>(n_);
}

bool MultiGraph::is_regular() const {
  return std::all_of(degree_.begin(), degree_.end(),
                     [&](int d) { return d == degree_.front(); });
}

std::int64_t MultiGraph::oriented_edge_count() const {
  return std::accumulate(degree_.begin(), degree_.end(), std::int64_t{0});
}

std::int64_t MultiGraph::plain_edge_count() const {
  std::int64_t total = 0;
  for (const Edge& e : edges_) {
    if (e.u != e.v) total += e.multiplicity;
  }
  return total;
}

void require_connected(const MultiGraph& g, const char* what) {
  if (g.num_vertices() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty graph");
  }
  if (!g.connected()) {
    throw std::invalid_argument(std::string(what) + ": graph is disconnected");
  }
}

std::vector<int> bfs_distances(const MultiGraph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
  std::queue<int> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (const auto& nb : g.neighbors(v)) {
      auto& d = dist[static_cast<std::size_t>(nb.vertex)];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(v)] + 1;
        frontier.push(nb.vertex);
      }
    }
  }
  return dist;
}

MetricTable::MetricTable(int n, std::vector<int> distances)
    : n_(n), d_(std::move(distances)) {
  if (d_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("MetricTable: distance array has wrong size");
  }
  diameter_ = d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

int MetricTable::eccentricity(int u) const {
  const auto r = row(u);
  return r.empty() ? 0 : *std::max_element(r.begin(), r.end());
}

MetricTable all_pairs_distances(const MultiGraph& g) {
  require_connected(g, "all_pairs_distances");
  const int n = g.num_vertices();
  std::vector<int> table;
  table.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const auto dist = bfs_distances(g, s);
    table.insert(table.end(), dist.begin(), dist.end());
  }
  return MetricTable(n, std::move(table));
}

}  // namespace bgap
