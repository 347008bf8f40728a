#include "bgap/gross.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "matching.hpp"

namespace bgap {

MultiGraph even_regularize(const MultiGraph& g) {
  require_connected(g, "even_regularize");
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, 2 * e.multiplicity});
  const int delta = g.max_degree();
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int loops = delta - g.degree(v);
    if (loops > 0) edges.push_back({v, v, loops});
  }
  return MultiGraph::build(g.num_vertices(), edges);
}

namespace {

struct Arc {
  int from;
  int to;
};

// Hierholzer on explicit edge copies; returns the arcs in circuit order.
std::vector<Arc> euler_circuit(const MultiGraph& g, std::mt19937_64& rng) {
  const int n = g.num_vertices();
  struct Copy {
    int a;
    int b;
  };
  std::vector<Copy> copies;
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    for (int k = 0; k < e.multiplicity; ++k) {
      const int id = static_cast<int>(copies.size());
      copies.push_back({e.u, e.v});
      incident[static_cast<std::size_t>(e.u)].push_back(id);
      if (e.v != e.u) incident[static_cast<std::size_t>(e.v)].push_back(id);
    }
  }
  for (auto& list : incident) std::shuffle(list.begin(), list.end(), rng);

  std::vector<char> used(copies.size(), 0);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
  const int start = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  std::vector<int> stack{start};
  std::vector<int> order;  // vertices in reverse circuit order
  while (!stack.empty()) {
    const int v = stack.back();
    auto& list = incident[static_cast<std::size_t>(v)];
    auto& pos = cursor[static_cast<std::size_t>(v)];
    while (pos < list.size() && used[static_cast<std::size_t>(list[pos])]) ++pos;
    if (pos == list.size()) {
      order.push_back(v);
      stack.pop_back();
      continue;
    }
    const int id = list[pos];
    used[static_cast<std::size_t>(id)] = 1;
    const Copy& c = copies[static_cast<std::size_t>(id)];
    stack.push_back(c.a == v ? c.b : c.a);
  }
  if (order.size() != copies.size() + 1) {
    throw std::logic_error("two_factorize: Euler circuit does not cover every edge");
  }
  std::reverse(order.begin(), order.end());
  std::vector<Arc> arcs;
  arcs.reserve(copies.size());
  for (std::size_t i = 0; i + 1 < order.size(); ++i) arcs.push_back({order[i], order[i + 1]});
  return arcs;
}

}  // namespace

TwoFactorization two_factorize(const MultiGraph& g, std::uint64_t seed) {
  require_connected(g, "two_factorize");
  const int n = g.num_vertices();
  if (!g.is_regular() || g.degree(0) % 2 != 0 || g.degree(0) == 0) {
    throw std::invalid_argument("two_factorize: graph must be regular of positive even degree");
  }
  const int k = g.degree(0) / 2;

  std::mt19937_64 rng(seed);
  const std::vector<Arc> arcs = euler_circuit(g, rng);

  TwoFactorization out;
  out.circuit.reserve(arcs.size() + 1);
  for (const Arc& a : arcs) out.circuit.push_back(a.from);
  out.circuit.push_back(arcs.empty() ? 0 : arcs.back().to);

  // Remaining arcs per tail, sorted by head so matching prefers low indices.
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
    out_arcs[static_cast<std::size_t>(arcs[static_cast<std::size_t>(i)].from)].push_back(i);
  }
  for (auto& list : out_arcs) {
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
      return arcs[static_cast<std::size_t>(a)].to < arcs[static_cast<std::size_t>(b)].to;
    });
  }

  for (int round = 0; round < k; ++round) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      for (int id : out_arcs[static_cast<std::size_t>(v)]) {
        adj[static_cast<std::size_t>(v)].push_back(arcs[static_cast<std::size_t>(id)].to);
      }
    }
    const std::vector<int> match = detail::bipartite_matching(adj, n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::vector<int> position(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      const int w = match[static_cast<std::size_t>(v)];
      if (w < 0) {
        throw std::logic_error("two_factorize: regular bipartite graph without a perfect matching");
      }
      auto& list = out_arcs[static_cast<std::size_t>(v)];
      const auto it = std::find_if(list.begin(), list.end(), [&](int id) {
        return arcs[static_cast<std::size_t>(id)].to == w;
      });
      perm[static_cast<std::size_t>(v)] = w;
      position[static_cast<std::size_t>(v)] = *it;
      list.erase(it);
    }
    out.perms.push_back(std::move(perm));
    out.arc_position.push_back(std::move(position));
  }
  return out;
}

MultiGraph realization_graph(int n, const std::vector<std::vector<int>>& perms) {
  std::vector<Edge> edges;
  for (const auto& perm : perms) {
    if (perm.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("realization_graph: permutation has the wrong length");
    }
    for (int v = 0; v < n; ++v) edges.push_back({v, perm[static_cast<std::size_t>(v)], 1});
  }
  return MultiGraph::build(n, edges);
}

PermutationAction SchreierSpec::action() const {
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < factors.perms.size(); ++i) {
    const std::string label = "s" + std::to_string(i);
    const auto& perm = factors.perms[i];
    std::vector<int> inv(perm.size());
    for (std::size_t v = 0; v < perm.size(); ++v) inv[static_cast<std::size_t>(perm[v])] = static_cast<int>(v);
    gens.push_back({label, label + "^-1", perm});
    gens.push_back({label + "^-1", label, std::move(inv)});
  }
  return PermutationAction::build(base.num_vertices(), std::move(gens));
}

SchreierSpec schreier_realize(const MultiGraph& g, std::uint64_t seed) {
  SchreierSpec spec;
  spec.base = even_regularize(g);
  spec.factors = two_factorize(spec.base, seed);
  return spec;
}

RealizationCheck verify_realization(const SchreierSpec& spec) {
  RealizationCheck out;
  const int n = spec.base.num_vertices();
  std::map<std::pair<int, int>, long long> balance;
  for (const Edge& e : spec.base.edges()) balance[{e.u, e.v}] += e.multiplicity;
  for (const auto& perm : spec.factors.perms) {
    if (perm.size() != static_cast<std::size_t>(n)) {
      out.ok = false;
      out.extra.push_back({-1, -1, 1});
      return out;
    }
    for (int v = 0; v < n; ++v) {
      const int w = perm[static_cast<std::size_t>(v)];
      balance[{std::min(v, w), std::max(v, w)}] -= 1;
    }
  }
  for (const auto& [key, count] : balance) {
    if (count > 0) out.missing.push_back({key.first, key.second, static_cast<int>(count)});
    if (count < 0) out.extra.push_back({key.first, key.second, static_cast<int>(-count)});
  }
  out.ok = out.missing.empty() && out.extra.empty();
  return out;
}

}  // namespace bgap
