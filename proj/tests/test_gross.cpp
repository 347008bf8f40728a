#include <array>
#include <map>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "bgap/generators.hpp"
#include "bgap/gross.hpp"
#include "oracles.hpp"

using namespace bgap;

namespace {

// Undirected edge multiset built by hand: {v, s(v)} for every v and s.
std::map<std::pair<int, int>, int> edges_of_perms(const std::vector<std::vector<int>>& perms) {
  std::map<std::pair<int, int>, int> out;
  for (const auto& s : perms)
    for (int v = 0; v < static_cast<int>(s.size()); ++v) {
      const int w = s[static_cast<std::size_t>(v)];
      ++out[{std::min(v, w), std::max(v, w)}];
    }
  return out;
}

std::map<std::pair<int, int>, int> edges_of(const MultiGraph& g) {
  std::map<std::pair<int, int>, int> out;
  for (const Edge& e : g.edges()) out[{e.u, e.v}] += e.multiplicity;
  return out;
}

bool is_permutation(const std::vector<int>& s) {
  std::vector<int> seen(s.size(), 0);
  for (int x : s) {
    if (x < 0 || x >= static_cast<int>(s.size()) || seen[static_cast<std::size_t>(x)]++) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("even_regularize: K2 and P3") {
  const MultiGraph k2 = even_regularize(complete_graph(2));
  REQUIRE(k2.edges().size() == 1);
  CHECK(k2.edges()[0] == Edge{0, 1, 2});
  CHECK(k2.is_regular());
  CHECK(k2.max_degree() == 2);

  const MultiGraph p3 = even_regularize(path_graph(3));
  CHECK(p3.is_regular());
  CHECK(p3.max_degree() == 4);
  CHECK(p3.loops_at(0) == 1);
  CHECK(p3.loops_at(2) == 1);
  CHECK(p3.loops_at(1) == 0);
}

TEST_CASE("even_regularize doubles loops too") {
  const std::array loop{Edge{0, 0, 1}};
  const MultiGraph g = even_regularize(build_graph(1, loop));
  CHECK(g.loops_at(0) == 2);
  CHECK(g.degree(0) == 4);

  const std::array mixed{Edge{0, 1, 1}, Edge{1, 1, 1}};
  const MultiGraph h = even_regularize(build_graph(2, mixed));
  // Delta = 3 at vertex 1; vertex 0 has degree 1 and gains 2 loops.
  CHECK(h.is_regular());
  CHECK(h.max_degree() == 6);
  CHECK(h.loops_at(0) == 2);
  CHECK(h.loops_at(1) == 2);
}

TEST_CASE("two_factorize: small cases") {
  const TwoFactorization k2 = two_factorize(even_regularize(complete_graph(2)));
  REQUIRE(k2.perms.size() == 1);
  CHECK(k2.perms[0] == std::vector<int>{1, 0});

  const TwoFactorization c6 = two_factorize(cycle_graph(6), 3);
  REQUIRE(c6.perms.size() == 1);
  const auto& s = c6.perms[0];
  const int step = (s[0] + 6) % 6;
  CHECK((step == 1 || step == 5));
  for (int v = 0; v < 6; ++v) CHECK(s[static_cast<std::size_t>(v)] == (v + step) % 6);
}

TEST_CASE("two_factorize reassembles the multigraph") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    const MultiGraph base = even_regularize(random_regular_graph(20, 3, seed));
    CHECK(base.max_degree() == 6);
    const TwoFactorization f = two_factorize(base, seed);
    REQUIRE(f.perms.size() == 3);
    for (const auto& s : f.perms) CHECK(is_permutation(s));
    CHECK(edges_of_perms(f.perms) == edges_of(base));
    CHECK(f.circuit.front() == f.circuit.back());
    CHECK(static_cast<std::int64_t>(f.circuit.size()) == base.oriented_edge_count() / 2 + 1);
  }
}

TEST_CASE("two_factorize: arc positions point into the circuit") {
  const MultiGraph base = even_regularize(hamming_cube(3));
  const TwoFactorization f = two_factorize(base, 2);
  for (std::size_t i = 0; i < f.perms.size(); ++i)
    for (int v = 0; v < base.num_vertices(); ++v) {
      const int pos = f.arc_position[i][static_cast<std::size_t>(v)];
      REQUIRE(pos >= 0);
      REQUIRE(pos + 1 < static_cast<int>(f.circuit.size()));
      CHECK(f.circuit[static_cast<std::size_t>(pos)] == v);
      CHECK(f.circuit[static_cast<std::size_t>(pos + 1)] == f.perms[i][static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("two_factorize: input checks") {
  CHECK_THROWS_AS(two_factorize(complete_graph(4)), std::invalid_argument);  // odd degree
  CHECK_THROWS_AS(two_factorize(path_graph(3)), std::invalid_argument);      // not regular
  const std::array split{Edge{0, 1, 2}, Edge{2, 3, 2}};
  CHECK_THROWS_AS(two_factorize(build_graph(4, split)), std::invalid_argument);
}

TEST_CASE("schreier_realize: examples") {
  const SchreierSpec k3 = schreier_realize(complete_graph(3));
  CHECK(k3.base.max_degree() == 4);
  CHECK(k3.factors.perms.size() == 2);
  CHECK(verify_realization(k3).ok);

  const std::array loop{Edge{0, 0, 1}};
  const SchreierSpec one = schreier_realize(build_graph(1, loop));
  CHECK(one.base.loops_at(0) == 2);
  REQUIRE(one.factors.perms.size() == 2);
  for (const auto& s : one.factors.perms) CHECK(s == std::vector<int>{0});
  CHECK(verify_realization(one).ok);

  const SchreierSpec h3 = schreier_realize(hamming_cube(3));
  CHECK(h3.base.max_degree() == 6);
  CHECK(h3.factors.perms.size() == 3);
  CHECK(verify_realization(h3).ok);
}

TEST_CASE("schreier_realize: action matches the base graph") {
  for (const char* spec : {"path:5", "complete:4", "cycle:7", "margulis:3", "random_regular:14:5"}) {
    CAPTURE(spec);
    const MultiGraph g = generate(parse_family(spec), 2);
    const SchreierSpec s = schreier_realize(g, 11);
    const PermutationAction a = s.action();
    CHECK(a.generators().size() == 2 * s.factors.perms.size());
    CHECK(schreier_graph(a) == s.base);
    CHECK(realization_graph(g.num_vertices(), s.factors.perms) == s.base);
    CHECK(gap_exact_2(s.base).value == doctest::Approx(2 * gap_exact_2(g).value).epsilon(1e-9));
  }
}

TEST_CASE("gap doubles for other exponents") {
  const MultiGraph g = path_graph(4);
  const MultiGraph base = even_regularize(g);
  for (double p : {1.0, 3.0}) {
    CAPTURE(p);
    const double one = gap_oracle_small(g, p, 1e-4).value;
    const double two = gap_oracle_small(base, p, 1e-4).value;
    CHECK(two == doctest::Approx(2 * one).epsilon(1e-9));
  }
}

TEST_CASE("verify_realization: negative control and orientation") {
  SchreierSpec s = schreier_realize(cycle_graph(6), 1);
  CHECK(verify_realization(s).ok);

  SchreierSpec flipped = s;
  auto& rot = flipped.factors.perms[0];
  std::vector<int> inverse(rot.size());
  for (std::size_t v = 0; v < rot.size(); ++v) inverse[static_cast<std::size_t>(rot[v])] = static_cast<int>(v);
  rot = inverse;
  CHECK(verify_realization(flipped).ok);

  SchreierSpec broken = s;
  std::swap(broken.factors.perms[0][0], broken.factors.perms[0][1]);
  const RealizationCheck r = verify_realization(broken);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.missing.empty());
  CHECK_FALSE(r.extra.empty());
}

TEST_CASE("realization over many random regular graphs") {
  std::mt19937_64 rng(5);
  int tested = 0;
  for (int i = 0; i < 60; ++i) {
    const int degree = 2 + static_cast<int>(rng() % 5);
    int n = 8 + static_cast<int>(rng() % 30);
    if ((n * degree) % 2 != 0) ++n;
    const MultiGraph g = random_regular_graph(n, degree, rng());
    const SchreierSpec s = schreier_realize(g, rng());
    CHECK(s.base.max_degree() == 2 * degree);
    CHECK(verify_realization(s).ok);
    CHECK(edges_of_perms(s.factors.perms) == edges_of(s.base));
    ++tested;
  }
  CHECK(tested == 60);
}
