#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "bgap/generators.hpp"
#include "bgap/spectral.hpp"
#include "oracles.hpp"

using namespace bgap;

namespace {

oracle::Pairs oriented_pairs(const MultiGraph& g) {
  oracle::Pairs out;
  for (const Edge& e : g.edges())
    for (int k = 0; k < e.multiplicity; ++k) {
      out.emplace_back(e.u, e.v);
      out.emplace_back(e.v, e.u);
    }
  return out;
}

oracle::Pairs undirected_pairs(const MultiGraph& g) {
  oracle::Pairs out;
  for (const Edge& e : g.edges())
    for (int k = 0; k < e.multiplicity; ++k) out.emplace_back(e.u, e.v);
  return out;
}

VectorMap column(std::vector<double> xs, double p = 2.0, double q = 2.0) {
  VectorMap f;
  f.values = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  f.p = p;
  f.q = q;
  return f;
}

VectorMap random_map(int n, int d, double p, double q, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  VectorMap f;
  f.values.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) f.values(i, j) = normal(rng);
  f.p = p;
  f.q = q;
  return f;
}

}  // namespace

TEST_CASE("rayleigh_quotient: hand values") {
  CHECK(rayleigh_quotient(complete_graph(2), column({0, 1})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rayleigh_quotient(cycle_graph(4), column({1, 0, -1, 0})) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("rayleigh_quotient agrees with a direct sum") {
  for (const char* spec : {"cycle:7", "hamming:3", "path:5", "random_regular:10:3"}) {
    const MultiGraph g = generate(parse_family(spec), 5);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      CAPTURE(spec);
      CAPTURE(p);
      const VectorMap f = random_map(g.num_vertices(), 1, p, 2.0, 11);
      std::vector<double> xs(f.values.data(), f.values.data() + g.num_vertices());
      CHECK(rayleigh_quotient(g, f) ==
            doctest::Approx(0.5 * oracle::quotient(oriented_pairs(g), xs, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("rayleigh_quotient: loops contribute nothing") {
  const std::array plain{Edge{0, 1, 1}, Edge{1, 2, 1}};
  const std::array looped{Edge{0, 1, 1}, Edge{1, 2, 1}, Edge{0, 0, 3}, Edge{2, 2, 1}};
  const VectorMap f = column({0.3, -1.0, 2.0}, 1.5);
  CHECK(rayleigh_quotient(build_graph(3, plain), f) == rayleigh_quotient(build_graph(3, looped), f));
}

TEST_CASE("rayleigh_quotient: translation and scaling invariance") {
  const MultiGraph g = hamming_cube(3);
  for (double p : {1.0, 1.5, 2.0, 3.0})
    for (double q : {1.0, 2.0, 3.0}) {
      CAPTURE(p);
      CAPTURE(q);
      const VectorMap f = random_map(8, 3, p, q, 3);
      const double base = rayleigh_quotient(g, f);
      VectorMap shifted = f;
      shifted.values.rowwise() += Eigen::RowVector3d(4.0, -2.0, 0.5);
      VectorMap scaled = f;
      scaled.values *= -7.25;
      CHECK(rayleigh_quotient(g, shifted) == doctest::Approx(base).epsilon(1e-10));
      CHECK(rayleigh_quotient(g, scaled) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("rayleigh_quotient: errors") {
  const MultiGraph g = cycle_graph(4);
  CHECK_THROWS_AS(rayleigh_quotient(g, column({1, 1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_quotient(g, column({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("gap_exact_2 matches the Jacobi oracle and closed forms") {
  for (int n = 2; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(gap_exact_2(complete_graph(n)).value == doctest::Approx(n).epsilon(1e-10));
    if (n >= 3) {
      const double s = std::sin(std::numbers::pi / n);
      CHECK(gap_exact_2(cycle_graph(n)).value == doctest::Approx(4 * s * s).epsilon(1e-10));
    }
  }
  for (int n = 1; n <= 6; ++n) CHECK(gap_exact_2(hamming_cube(n)).value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(gap_exact_2(cycle_graph(6)).value == doctest::Approx(1.0).epsilon(1e-12));

  for (const char* spec : {"path:7", "margulis:4", "random_regular:16:3", "random_regular:18:4"}) {
    CAPTURE(spec);
    const MultiGraph g = generate(parse_family(spec), 9);
    const GapEstimate gap = gap_exact_2(g);
    CHECK(gap.bound_kind == BoundKind::exact);
    CHECK(gap.value == doctest::Approx(oracle::second_eigenvalue(g.num_vertices(), undirected_pairs(g))).epsilon(1e-9));
    CHECK(rayleigh_quotient(g, gap.minimizer) == doctest::Approx(gap.value).epsilon(1e-9));
  }
}

TEST_CASE("gap_exact_2: errors") {
  const std::array split{Edge{0, 1, 1}, Edge{2, 3, 1}};
  CHECK_THROWS_AS(gap_exact_2(build_graph(4, split)), std::invalid_argument);
  const std::array loop{Edge{0, 0, 1}};
  CHECK_THROWS_AS(gap_exact_2(build_graph(1, loop)), std::invalid_argument);
}

TEST_CASE("gap_estimate: p = 2 recovers the eigenvalue for any d") {
  CHECK(gap_estimate(cycle_graph(6), 2, 2, 1).value == doctest::Approx(1.0).epsilon(1e-6));
  for (const MultiGraph& g : {cycle_graph(7), hamming_cube(3), path_graph(5)}) {
    const double exact = gap_exact_2(g).value;
    for (int d : {1, 3}) {
      CAPTURE(d);
      const GapEstimate est = gap_estimate(g, 2, 2, d);
      CHECK(est.bound_kind == BoundKind::upper);
      CHECK(est.value == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}

TEST_CASE("gap_estimate: value is attained by the minimizer") {
  const MultiGraph g = random_regular_graph(12, 3, 4);
  for (double p : {1.0, 1.5, 3.0}) {
    CAPTURE(p);
    const GapEstimate est = gap_estimate(g, p, 2.0, 2, {.restarts = 8, .max_iter = 2000});
    CHECK(est.minimizer.dim() == 2);
    CHECK(rayleigh_quotient(g, est.minimizer) == doctest::Approx(est.value).epsilon(1e-12));
    CHECK(est.minimizer.values.colwise().sum().norm() < 1e-9);
  }
}

TEST_CASE("gap_estimate: deterministic for a fixed seed") {
  const MultiGraph g = cycle_graph(9);
  const DescentOptions opts{.restarts = 6, .max_iter = 1000, .tol = 1e-10, .seed = 42};
  const GapEstimate a = gap_estimate(g, 1.5, 2.0, 2, opts);
  const GapEstimate b = gap_estimate(g, 1.5, 2.0, 2, opts);
  CHECK(a.value == b.value);
  CHECK(a.minimizer.values == b.minimizer.values);
}

TEST_CASE("gap_estimate: matched exponents do not depend on d") {
  const MultiGraph g = cycle_graph(6);
  const DescentOptions opts{.restarts = 16, .max_iter = 3000};
  for (double p : {1.5, 3.0}) {
    CAPTURE(p);
    const double one = gap_estimate(g, p, p, 1, opts).value;
    const double three = gap_estimate(g, p, p, 3, opts).value;
    CHECK(three == doctest::Approx(one).epsilon(1e-2));
  }
}

TEST_CASE("gap_estimate: extra coordinates do not raise the value") {
  // Any R-valued map embeds in l_q^d, so the d-value sits below the d = 1 value.
  const MultiGraph g = hamming_cube(3);
  const DescentOptions opts{.restarts = 16, .max_iter = 3000};
  const double one = gap_estimate(g, 3.0, 2.0, 1, opts).value;
  const double two = gap_estimate(g, 3.0, 2.0, 2, opts).value;
  CHECK(two <= one * (1 + 1e-2));
}

TEST_CASE("gap_estimate: argument checks") {
  CHECK_THROWS_AS(gap_estimate(cycle_graph(4), 0.5, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_estimate(cycle_graph(4), 2, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_estimate(cycle_graph(4), 2, 2, 0), std::invalid_argument);
}

TEST_CASE("best_gap picks the exact route when it applies") {
  CHECK(best_gap(cycle_graph(5), 2, 2, 3).method == GapMethod::eigen_exact);
  CHECK(best_gap(cycle_graph(5), 2, 3, 1).method == GapMethod::eigen_exact);
  CHECK(best_gap(cycle_graph(5), 2, 3, 2, {.restarts = 2, .max_iter = 200}).method ==
        GapMethod::multistart_descent);
}

TEST_CASE("extrapolation_report") {
  const std::vector<MultiGraph> c4{cycle_graph(4)};
  const std::array two{2.0};
  const ExtrapolationReport r = extrapolation_report(c4, two);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<MultiGraph> k3{complete_graph(3)};
  const std::array four{4.0};
  const ExtrapolationReport s = extrapolation_report(k3, four, {.restarts = 8, .max_iter = 2000});
  REQUIRE(s.rows.size() == 1);
  CHECK(std::isfinite(s.rows[0].ratio));
  CHECK(s.rows[0].ratio > 0);
  CHECK(s.per_exponent.size() == 1);
  CHECK(s.per_exponent[0].min_ratio == s.rows[0].ratio);
}
