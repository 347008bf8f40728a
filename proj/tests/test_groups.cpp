#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "bgap/generators.hpp"
#include "bgap/groups.hpp"
#include "oracles.hpp"

using namespace bgap;

namespace {

PermutationAction group_action(const char* spec, std::vector<int> subgroup = {}) {
  return action_from_group(parse_group(spec), subgroup);
}

Eigen::MatrixXd random_xi(int m, int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(m, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = normal(rng);
  return x;
}

double entrywise_norm(const Eigen::MatrixXd& x, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x.data()[i]), p);
  return std::pow(s, 1.0 / p);
}

std::vector<int> sorted_row(const MetricTable& m, int u) {
  std::vector<int> r(m.row(u).begin(), m.row(u).end());
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST_CASE("action_from_group: standard examples") {
  const PermutationAction c6 = group_action("cyclic:6");
  CHECK(c6.size() == 6);
  CHECK(c6.generators().size() == 2);
  CHECK(c6.transitive());
  const MultiGraph g6 = schreier_graph(c6);
  CHECK(g6.is_regular());
  CHECK(g6.max_degree() == 2);
  CHECK(g6.connected());
  CHECK(sorted_row(all_pairs_distances(g6), 0) == sorted_row(all_pairs_distances(cycle_graph(6)), 0));

  const PermutationAction b3 = group_action("boolean_cube:3");
  CHECK(b3.size() == 8);
  CHECK(b3.generators().size() == 3);
  for (int g = 0; g < 3; ++g) CHECK(b3.inverse_index(g) == g);
  const MultiGraph h3 = schreier_graph(b3);
  CHECK(h3.max_degree() == 3);
  CHECK(h3.edges().size() == 12);
  CHECK(sorted_row(all_pairs_distances(h3), 0) == sorted_row(all_pairs_distances(hamming_cube(3)), 0));
  CHECK(gap_exact_2(h3).value == doctest::Approx(2.0).epsilon(1e-10));

  const PermutationAction b2 = group_action("boolean_cube:2");
  const MultiGraph c4 = schreier_graph(b2);
  CHECK(c4.num_vertices() == 4);
  CHECK(c4.is_regular());
  CHECK(c4.max_degree() == 2);
  CHECK(c4.connected());
}

TEST_CASE("group orders match direct counts") {
  CHECK(group_action("sl_mod:2:3").size() == oracle::count_sl2(3));
  CHECK(group_action("sl_mod:2:3").size() == 24);
  CHECK(group_action("sl_mod:2:3").generators().size() == 4);
  CHECK(group_action("sl_mod:2:5").size() == oracle::count_sl2(5));
  CHECK(group_action("symmetric:4").size() == 24);
  CHECK(group_action("boolean_cube:5").size() == 32);
}

TEST_CASE("Schreier graph degrees") {
  // |S| at every vertex, except that a fixed point of a self-inverse
  // generator is a whole loop and adds 2 instead of 1.
  const std::vector<std::pair<const char*, std::vector<int>>> cases{
      {"cyclic:2", {}},         {"cyclic:7", {}},    {"boolean_cube:4", {}}, {"symmetric:4", {}},
      {"sl_mod:2:3", {}},       {"sl_mod:2:3", {1}}, {"symmetric:4", {1}},   {"cyclic:12", {3}},
      {"sl_mod:2:2", {}}};
  for (const auto& [spec, sub] : cases) {
    CAPTURE(spec);
    CAPTURE(sub.size());
    const PermutationAction a = group_action(spec, sub);
    const MultiGraph g = schreier_graph(a);
    for (int v = 0; v < g.num_vertices(); ++v) {
      int expected = static_cast<int>(a.generators().size());
      for (int s = 0; s < static_cast<int>(a.generators().size()); ++s)
        if (a.inverse_index(s) == s && a.generators()[static_cast<std::size_t>(s)].perm[static_cast<std::size_t>(v)] == v)
          ++expected;
      CHECK(g.degree(v) == expected);
    }
    if (sub.empty()) CHECK(g.is_regular());
  }
}

TEST_CASE("coset actions have the right index") {
  // Index 1 is the first generator in breadth-first order.
  CHECK(group_action("sl_mod:2:3", {1}).size() == 8);  // E01+ has order 3
  CHECK(group_action("symmetric:4", {1}).size() == 12);
  const GroupEnumeration z12 = enumerate_group(parse_group("cyclic:12"));
  const int x = z12.elements[3][0];
  CHECK(group_action("cyclic:12", {3}).size() == std::gcd(x, 12));
}

TEST_CASE("generators preserve the l_p norm and the zero-sum subspace") {
  const PermutationAction a = group_action("sl_mod:2:3");
  Eigen::MatrixXd xi = random_xi(a.size(), 3, 5);
  xi.rowwise() -= xi.colwise().mean();
  for (const Generator& gen : a.generators()) {
    Eigen::MatrixXd moved(xi.rows(), xi.cols());
    for (int c = 0; c < a.size(); ++c) moved.row(gen.perm[static_cast<std::size_t>(c)]) = xi.row(c);
    for (double p : {1.0, 2.0, 3.0}) CHECK(entrywise_norm(moved, p) == doctest::Approx(entrywise_norm(xi, p)).epsilon(1e-14));
    CHECK(moved.colwise().sum().norm() < 1e-12);
  }
}

TEST_CASE("displacement of s equals displacement of its inverse") {
  for (const char* spec : {"cyclic:9", "sl_mod:2:3", "symmetric:4"}) {
    const PermutationAction a = group_action(spec);
    for (unsigned seed = 0; seed < 10; ++seed) {
      const Eigen::MatrixXd xi = random_xi(a.size(), 2, seed);
      for (double p : {1.0, 1.5, 2.0, 3.0})
        for (int g = 0; g < static_cast<int>(a.generators().size()); ++g) {
          CHECK(std::abs(displacement(a, g, xi, p) - displacement(a, a.inverse_index(g), xi, p)) < 1e-12);
        }
    }
  }
}

TEST_CASE("displacement: direct value") {
  const PermutationAction a = group_action("cyclic:4");
  Eigen::MatrixXd xi(4, 1);
  xi << 1, 0, 0, 0;
  // Moving a point mass changes two coordinates by 1.
  CHECK(displacement(a, 0, xi, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(displacement(a, 0, xi, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(displacement(a, 0, Eigen::MatrixXd::Zero(4, 1), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(displacement(a, 5, xi, 2.0), std::out_of_range);
}

TEST_CASE("stabilized dimension counts generator pairs") {
  CHECK(stabilized_dimension(group_action("cyclic:6")) == 2);
  CHECK(stabilized_dimension(group_action("boolean_cube:3")) == 4);
  CHECK(stabilized_dimension(group_action("sl_mod:2:3")) == 3);
}

TEST_CASE("kappa: cyclic groups at p = 2") {
  for (int n = 3; n <= 8; ++n) {
    CAPTURE(n);
    const KappaEstimate k = kappa_estimate(group_action(("cyclic:" + std::to_string(n)).c_str()), 2.0, 0);
    CHECK(k.value == doctest::Approx(2 * std::sin(std::numbers::pi / n)).epsilon(1e-3));
    CHECK(k.d == 2);
  }
}

TEST_CASE("kappa: boolean_cube(2) at p = 2") {
  // lambda_1(H_2) = 2 = (|S|/2) kappa^2 with |S| = 2.
  const KappaEstimate k = kappa_estimate(group_action("boolean_cube:2"), 2.0, 0);
  CHECK(k.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("kappa: minimizer shape, attained value, gap lower bound") {
  for (const char* spec : {"cyclic:5", "boolean_cube:3", "sl_mod:2:3"})
    for (double p : {1.0, 2.0, 3.0}) {
      CAPTURE(spec);
      CAPTURE(p);
      const PermutationAction a = group_action(spec);
      const KappaEstimate k = kappa_estimate(a, p, 0, {.restarts = 8});
      CHECK(k.minimizer.rows() == a.size());
      CHECK(k.minimizer.cols() == k.d);
      CHECK(k.minimizer.colwise().sum().norm() < 1e-9);
      CHECK(entrywise_norm(k.minimizer, p) == doctest::Approx(1.0).epsilon(1e-9));
      double worst = 0.0;
      for (int g = 0; g < static_cast<int>(a.generators().size()); ++g)
        worst = std::max(worst, displacement(a, g, k.minimizer, p));
      CHECK(worst == doctest::Approx(k.value).epsilon(1e-9));
      CHECK(k.value >= k.lower_from_gap - 1e-6);
      CHECK(k.lower_certified == (p == 2.0));
    }
}

TEST_CASE("kappa: more columns never hurt") {
  const PermutationAction a = group_action("boolean_cube:3");
  for (double p : {1.0, 3.0}) {
    CAPTURE(p);
    const double line = kappa_estimate(a, p, 1).value;
    const double stable = kappa_estimate(a, p, 0).value;
    CHECK(stable <= line + 1e-6);
  }
}

TEST_CASE("kappa: Hamming cubes satisfy lambda_1 = (n/2) kappa^p") {
  for (int n : {2, 3})
    for (double p : {1.0, 2.0, 3.0}) {
      CAPTURE(n);
      CAPTURE(p);
      const KappaEstimate k = kappa_estimate(group_action(("boolean_cube:" + std::to_string(n)).c_str()), p, 0);
      CHECK(k.gap == doctest::Approx(0.5 * n * std::pow(k.value, p)).epsilon(5e-2));
    }
}

TEST_CASE("kappa: argument checks") {
  const PermutationAction a = group_action("cyclic:5");
  CHECK_THROWS_AS(kappa_estimate(a, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(kappa_estimate(a, 2.0, -1), std::invalid_argument);
}

TEST_CASE("check_sandwich arithmetic") {
  const SandwichReport ok = check_sandwich(1.0, 1.5, 4, 2.0, 1.0);
  CHECK(ok.lower_ok);
  CHECK(ok.upper_ok);
  CHECK_FALSE(ok.pak_zuk_ok);  // needs lambda >= 2
  CHECK(ok.lower_slack == doctest::Approx(0.5));
  CHECK(ok.upper_slack == doctest::Approx(0.5));
  CHECK(*ok.pak_zuk_slack == doctest::Approx(-0.5));

  CHECK(check_sandwich(1.0, 2.0, 4, 2.0, 1.0).passed());
  CHECK_FALSE(check_sandwich(1.0, 0.9, 4, 2.0, std::nullopt).lower_ok);
  CHECK(check_sandwich(1.0, 0.995, 4, 2.0, std::nullopt).lower_ok);
  CHECK_FALSE(check_sandwich(1.0, 2.1, 4, 2.0, std::nullopt).upper_ok);
}

TEST_CASE("verify_sandwich on the tested actions") {
  for (const char* spec : {"cyclic:5", "cyclic:8", "boolean_cube:3", "sl_mod:2:3"})
    for (double p : {1.0, 2.0, 3.0}) {
      CAPTURE(spec);
      CAPTURE(p);
      const GroupSpec gs = parse_group(spec);
      const PermutationAction a = action_from_group(gs);
      const auto q = standard_automorphisms(gs);
      const SandwichReport r = verify_sandwich(a, p, 0, pak_zuk_nu(a, q).nu);
      CHECK(r.passed());
    }
  const SandwichReport c8 = verify_sandwich(group_action("cyclic:8"), 2.0, 0, 1.0);
  CHECK(std::abs(*c8.pak_zuk_slack) < 1e-2 * c8.lambda);
}

TEST_CASE("a single involution breaks the lower side") {
  // Z/2 on itself: kappa^p = 2^p but lambda_1(K_2; R, p) = 2^{p-1}.
  const PermutationAction a = group_action("cyclic:2");
  for (double p : {1.0, 2.0, 3.0}) {
    CAPTURE(p);
    const KappaEstimate k = kappa_estimate(a, p, 0);
    CHECK(k.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(k.gap == doctest::Approx(std::pow(2.0, p - 1)).epsilon(1e-6));
    CHECK_FALSE(check_sandwich(k.value, k.gap, 1, p, std::nullopt).lower_ok);
  }
}

TEST_CASE("pak_zuk_nu") {
  for (int n = 2; n <= 5; ++n) {
    const GroupSpec gs = parse_group("boolean_cube:" + std::to_string(n));
    const NuResult r = pak_zuk_nu(action_from_group(gs), standard_automorphisms(gs));
    CHECK(r.nu == 1.0);
    CHECK(r.orbits.size() == 1);
  }
  const GroupSpec c = parse_group("cyclic:7");
  const NuResult rc = pak_zuk_nu(action_from_group(c), standard_automorphisms(c));
  CHECK(rc.nu == 1.0);
  REQUIRE(rc.orbits.size() == 1);
  CHECK(rc.orbits[0].size() == 2);

  const GroupSpec sl = parse_group("sl_mod:2:3");
  CHECK(pak_zuk_nu(action_from_group(sl), standard_automorphisms(sl)).nu == 2.0);

  const PermutationAction a = action_from_group(c);
  CHECK(pak_zuk_nu(a, {}).nu == 2.0);
  const std::vector<LabelMap> collapse{{{"+1", "+1"}, {"-1", "+1"}}};
  CHECK_THROWS_AS(pak_zuk_nu(a, collapse), std::invalid_argument);
  const std::vector<LabelMap> unknown{{{"+1", "+2"}, {"-1", "-1"}}};
  CHECK_THROWS_AS(pak_zuk_nu(a, unknown), std::invalid_argument);
}

TEST_CASE("PermutationAction validation") {
  CHECK_THROWS_AS(PermutationAction::build(3, {{"a", "a", {0, 0, 1}}}), std::invalid_argument);
  CHECK_THROWS_AS(PermutationAction::build(3, {{"a", "b", {1, 2, 0}}, {"b", "a", {1, 2, 0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PermutationAction::build(3, {{"a", "a", {1, 2, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(PermutationAction::build(2, {{"a", "x", {1, 0}}}), std::invalid_argument);
  const PermutationAction ok = PermutationAction::build(3, {{"a", "b", {1, 2, 0}}, {"b", "a", {2, 0, 1}}});
  CHECK(ok.inverse_index(0) == 1);
  CHECK(*ok.index_of("b") == 1);

  const PermutationAction split = PermutationAction::build(4, {{"s", "s", {1, 0, 3, 2}}});
  CHECK_FALSE(split.transitive());
  CHECK_THROWS_AS(schreier_graph(split), std::invalid_argument);
}

TEST_CASE("Schreier graph: fixed points are loops") {
  const PermutationAction a = PermutationAction::build(3, {{"s", "s", {1, 0, 2}}, {"t", "t", {0, 2, 1}}});
  const MultiGraph g = schreier_graph(a);
  CHECK(g.loops_at(2) == 1);
  CHECK(g.loops_at(0) == 1);
  CHECK(g.plain_edge_count() == 2);
}

TEST_CASE("action io") {
  const PermutationAction a = group_action("sl_mod:2:3");
  std::stringstream ss;
  write_action(ss, a);
  CHECK(read_action(ss) == a);

  std::istringstream bad_header("x 1\n");
  CHECK_THROWS(read_action(bad_header));
  std::istringstream short_row("3 1\na a 1 0\n");
  CHECK_THROWS(read_action(short_row));
  std::istringstream missing("3 2\na b 1 2 0\n");
  CHECK_THROWS(read_action(missing));
}

TEST_CASE("parse_group") {
  const GroupSpec s = parse_group("sl_mod:2:3");
  CHECK(s.kind == GroupKind::sl_mod);
  CHECK(s.n == 2);
  CHECK(s.k == 3);
  CHECK(parse_group(s.to_string()).k == 3);
  CHECK_THROWS_AS(parse_group("dihedral:4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_group("sl_mod:2"), std::invalid_argument);
  CHECK_THROWS_AS(action_from_group(parse_group("symmetric:9"), {}, 1000), std::runtime_error);
}
