#pragma once

#include <cstdint>
#include <vector>

#include "bgap/graph.hpp"
#include "bgap/groups.hpp"

namespace bgap {

/// Doubles every edge (loops included), then adds Delta(G) - deg(v) loops at
/// each vertex v. The result is 2 Delta(G)-regular.
MultiGraph even_regularize(const MultiGraph& g);

/// Permutations whose functional graphs decompose a 2k-regular multigraph,
/// plus where each arc came from.
struct TwoFactorization {
  std::vector<std::vector<int>> perms;
  /// Vertex sequence of the Euler circuit (first vertex repeated at the end).
  std::vector<int> circuit;
  /// arc_position[i][v]: index in the circuit of the arc v -> perms[i][v].
  std::vector<std::vector<int>> arc_position;
};

/// Euler circuit (Hierholzer, seeded start and edge order), orientation along
/// the circuit, then k perfect matchings peeled from the k-regular bipartite
/// out/in graph. Throws std::invalid_argument unless g is connected and
/// regular of even degree.
TwoFactorization two_factorize(const MultiGraph& g, std::uint64_t seed = 0);

/// Each permutation s contributes {v, s(v)} for every v; fixed points are
/// loops.
MultiGraph realization_graph(int n, const std::vector<std::vector<int>>& perms);

struct SchreierSpec {
  MultiGraph base;  ///< the even regularization G'
  TwoFactorization factors;

  /// Generators s{i} and s{i}^-1 acting on V.
  PermutationAction action() const;
};

SchreierSpec schreier_realize(const MultiGraph& g, std::uint64_t seed = 0);

struct RealizationCheck {
  bool ok = false;
  std::vector<Edge> missing;  ///< in base, not produced by the permutations
  std::vector<Edge> extra;    ///< produced by the permutations, not in base
};

/// Rebuilds the multigraph from the permutations and compares edge
/// multisets with `spec.base`.
RealizationCheck verify_realization(const SchreierSpec& spec);

}  // namespace bgap
