#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace bgap {

/// One undirected edge class of a multigraph. `u == v` is a self-loop.
struct Edge {
  int u = 0;
  int v = 0;
  int multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite undirected multigraph on vertices 0..n-1, possibly with self-loops.
///
/// Degree convention: a non-loop edge of multiplicity m adds m to the degree
/// of both endpoints, a loop of multiplicity m adds 2m. The oriented edge set
/// holds m copies of each orientation of a non-loop edge and 2m copies of
/// (v, v) for a loop, so the handshake identity sum(deg) = |oriented E| holds.
///
/// Immutable after construction.
class MultiGraph {
 public:
  struct Neighbor {
    int vertex;
    int multiplicity;
  };

  MultiGraph() = default;

  /// Normalizes the edge list (u <= v, duplicate pairs merged by summing
  /// multiplicity). Throws std::invalid_argument on an out-of-range index or a
  /// non-positive multiplicity.
  static MultiGraph build(int n, std::span<const Edge> edges);

  int num_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& degrees() const { return degree_; }
  /// Degree without loop contributions.
  int plain_degree(int v) const;
  int loops_at(int v) const { return loops_[static_cast<std::size_t>(v)]; }
  int max_degree() const { return max_degree_; }
  double average_degree() const;
  bool is_regular() const;
  bool connected() const { return connected_; }
  std::int64_t oriented_edge_count() const;
  /// Number of undirected non-loop edge copies (sum of multiplicities).
  std::int64_t plain_edge_count() const;

  /// Non-loop neighbours with multiplicities, sorted by vertex.
  std::span<const Neighbor> neighbors(int v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int max_degree_ = 0;
  bool connected_ = false;
  std::vector<Edge> edges_;
  std::vector<int> degree_;
  std::vector<int> loops_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

inline MultiGraph build_graph(int n, std::span<const Edge> edges) {
  return MultiGraph::build(n, edges);
}

/// Throws std::invalid_argument unless `g` is connected and non-empty.
void require_connected(const MultiGraph& g, const char* what);

/// All-pairs hop distances of a connected multigraph.
class MetricTable {
 public:
  MetricTable() = default;
  MetricTable(int n, std::vector<int> distances);

  int size() const { return n_; }
  int operator()(int u, int v) const {
    return d_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(v)];
  }
  std::span<const int> row(int u) const {
    return {d_.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }
  int diameter() const { return diameter_; }
  /// Largest distance from `u`.
  int eccentricity(int u) const;

 private:
  int n_ = 0;
  int diameter_ = 0;
  std::vector<int> d_;
};

/// BFS from every vertex. Multiplicities and loops do not change distances.
/// Throws std::invalid_argument on a disconnected graph.
MetricTable all_pairs_distances(const MultiGraph& g);

/// BFS distances from one source; unreachable vertices get -1.
std::vector<int> bfs_distances(const MultiGraph& g, int source);

}  // namespace bgap
