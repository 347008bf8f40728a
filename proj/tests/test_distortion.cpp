#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "bgap/distortion.hpp"
#include "bgap/generators.hpp"
#include "oracles.hpp"

using namespace bgap;

namespace {

oracle::Pairs pairs_of(const MultiGraph& g) {
  oracle::Pairs out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

std::vector<MultiGraph> small_graphs() {
  const std::array star{Edge{0, 1, 1}, Edge{0, 2, 1}, Edge{0, 3, 1}};
  const std::array paw{Edge{0, 1, 1}, Edge{1, 2, 1}, Edge{0, 2, 1}, Edge{2, 3, 1}};
  const std::array diamond{Edge{0, 1, 1}, Edge{1, 2, 1}, Edge{0, 2, 1}, Edge{2, 3, 1}, Edge{1, 3, 1}};
  std::vector<MultiGraph> out{cycle_graph(5),  cycle_graph(6),  cycle_graph(8), path_graph(6),
                              hamming_cube(3), complete_graph(5), build_graph(4, star),
                              build_graph(4, paw), build_graph(4, diamond)};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) out.push_back(random_regular_graph(8, 3, seed));
  return out;
}

}  // namespace

TEST_CASE("map_distortion: Hamming identity embedding") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    const MapDistortion d = map_distortion(hamming_cube(n), hamming_identity_embedding(n, 2.0));
    CHECK(d.distortion == doctest::Approx(std::sqrt(n)).epsilon(1e-12));
    CHECK(d.exact);
    CHECK(d.squared_num == n);
    CHECK(d.squared_den == 1);
    for (double p : {1.0, 1.25, 1.5}) {
      const MapDistortion e = map_distortion(hamming_cube(n), hamming_identity_embedding(n, p));
      CHECK(e.distortion == doctest::Approx(std::pow(n, 1 - 1 / p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("map_distortion: isometries and similarities") {
  // H2 = C4 and the identity embedding into l_1 is isometric.
  const MapDistortion iso = map_distortion(hamming_cube(2), hamming_identity_embedding(2, 1.0));
  CHECK(iso.distortion == doctest::Approx(1.0).epsilon(1e-15));

  VectorMap scaled = hamming_identity_embedding(2, 1.0);
  scaled.values *= 3.0;
  CHECK(map_distortion(hamming_cube(2), scaled).distortion == doctest::Approx(1.0).epsilon(1e-15));

  const MapDistortion fre = map_distortion(cycle_graph(7), frechet_embedding(all_pairs_distances(cycle_graph(7)), 2.0));
  CHECK(fre.distortion >= 1.0);

  for (const MultiGraph& g : small_graphs()) {
    const MapDistortion f = map_distortion(g, frechet_embedding(all_pairs_distances(g), 3.0));
    CHECK(f.distortion >= 1.0 - 1e-12);
    CHECK(f.distortion == doctest::Approx(f.lipschitz * f.co_lipschitz).epsilon(1e-12));
  }
}

TEST_CASE("map_distortion: polygon embedding of a cycle") {
  // Chord 2 sin(pi k / n) against hop distance k; the worst ratio sits at the ends.
  const int n = 8;
  const MapDistortion d = map_distortion(cycle_graph(n), cycle_polygon_embedding(n, 2.0));
  double lo = 1e9, hi = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double r = 2 * std::sin(std::numbers::pi * k / n) / k;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(d.distortion == doctest::Approx(hi / lo).epsilon(1e-12));
}

TEST_CASE("map_distortion: errors") {
  VectorMap f;
  f.values = Eigen::MatrixXd::Zero(4, 1);
  CHECK_THROWS_AS(map_distortion(cycle_graph(4), f), std::invalid_argument);
  f.values = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(map_distortion(cycle_graph(4), f), std::invalid_argument);
}

TEST_CASE("r_eps: examples") {
  CHECK(r_eps_lower(all_pairs_distances(complete_graph(6)), 0.5).value == 1.0);
  const MetricTable c8 = all_pairs_distances(cycle_graph(8));
  CHECK(r_eps_lower(c8, 0.5).value == doctest::Approx(0.5));
  CHECK(r_eps_exact(c8, 0.5).value == doctest::Approx(0.75));
  CHECK(r_eps_lower(all_pairs_distances(hamming_cube(3)), 0.5).value == doctest::Approx(1.0 / 3));
  CHECK(r_eps_exact(all_pairs_distances(complete_graph(4)), 0.5).value == 1.0);
  CHECK(r_eps_exact(all_pairs_distances(hamming_cube(2)), 0.75).value == 1.0);
  CHECK(r_eps_threshold(8, 0.5) == 4);
  CHECK(r_eps_threshold(7, 0.5) == 4);
  CHECK(r_eps_threshold(3, 0.75) == 3);
}

TEST_CASE("r_eps: exact matches subset enumeration and dominates the ball rule") {
  for (const MultiGraph& g : small_graphs())
    for (double eps : {0.25, 0.5, 0.75}) {
      CAPTURE(g.num_vertices());
      CAPTURE(eps);
      const MetricTable m = all_pairs_distances(g);
      const auto ref = oracle::distances(g.num_vertices(), pairs_of(g));
      const int k = r_eps_threshold(g.num_vertices(), eps);
      const double want = static_cast<double>(oracle::min_subset_diameter(ref, k)) / m.diameter();
      const REps exact = r_eps_exact(m, eps);
      CHECK(exact.value == doctest::Approx(want).epsilon(1e-15));
      CHECK(static_cast<int>(exact.witness.size()) >= k);
      CHECK(r_eps_lower(m, eps).value <= exact.value + 1e-15);
    }
}

TEST_CASE("max_displacement: modes agree with brute force") {
  for (const MultiGraph& g : small_graphs()) {
    const MetricTable m = all_pairs_distances(g);
    const auto ref = oracle::distances(g.num_vertices(), pairs_of(g));
    const int want = oracle::brute_displacement(ref);
    CAPTURE(g.num_vertices());
    const Displacement brute = max_displacement(m, DisplacementMode::brute);
    const Displacement match = max_displacement(m, DisplacementMode::matching);
    const Displacement heur = max_displacement(m, DisplacementMode::heuristic, {.seed = 3});
    CHECK(brute.value == want);
    CHECK(match.value == want);
    CHECK(brute.exact);
    CHECK(match.exact);
    CHECK(heur.value <= want);
    for (const Displacement* d : {&brute, &match, &heur}) {
      int least = 1 << 20;
      for (int v = 0; v < m.size(); ++v) least = std::min(least, m(v, d->perm[static_cast<std::size_t>(v)]));
      CHECK(least == d->value);
    }
  }
  CHECK(max_displacement(all_pairs_distances(complete_graph(5)), DisplacementMode::brute).value == 1);
  CHECK(max_displacement(all_pairs_distances(cycle_graph(6)), DisplacementMode::brute).value == 3);
}

TEST_CASE("max_displacement: cayley mode on Hamming cubes") {
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    const PermutationAction a = action_from_group(parse_group("boolean_cube:" + std::to_string(n)));
    const MetricTable m = all_pairs_distances(schreier_graph(a));
    const Displacement d = max_displacement(m, DisplacementMode::cayley, {.action = &a});
    CHECK(d.value == n);
    if (n <= 3) CHECK(max_displacement(m, DisplacementMode::brute).value == n);
  }
  CHECK_THROWS(max_displacement(all_pairs_distances(cycle_graph(4)), DisplacementMode::cayley));
}

TEST_CASE("gn_bound") {
  const MultiGraph h3 = hamming_cube(3);
  const LowerBound b = gn_bound(h3, all_pairs_distances(h3), gap_exact_2(h3), 0.5, 1.0 / 3);
  CHECK(b.value == doctest::Approx(std::sqrt(0.5) * (1.0 / 3) / 2 * 3 * std::sqrt(2.0 / 3)).epsilon(1e-12));
  CHECK(b.value == doctest::Approx(0.2887).epsilon(1e-3));
  CHECK(b.certified);

  const MultiGraph k4 = complete_graph(4);
  const LowerBound c = gn_bound(k4, all_pairs_distances(k4), gap_exact_2(k4), 0.5, 1.0);
  CHECK(c.value == doctest::Approx(std::sqrt(0.5) / 2 * std::sqrt(4.0 / 3)).epsilon(1e-12));
  CHECK(c.value <= 1.0);

  GapEstimate zero = gap_exact_2(k4);
  zero.value = 0.0;
  CHECK(gn_bound(k4, all_pairs_distances(k4), zero, 0.5, 1.0).value == 0.0);
}

TEST_CASE("jv_bound") {
  for (int n = 1; n <= 6; ++n) {
    const MultiGraph h = hamming_cube(n);
    const LowerBound b = jv_bound(h, gap_exact_2(h), n);
    CHECK(b.value == doctest::Approx(std::sqrt(n)).epsilon(1e-12));
    CHECK(b.certified);
  }
  GapEstimate upper = gap_estimate(cycle_graph(6), 1.5, 2, 1, {.restarts = 4, .max_iter = 500});
  CHECK_FALSE(jv_bound(cycle_graph(6), upper, 3).certified);
  upper.value = 0.0;
  CHECK(jv_bound(cycle_graph(6), upper, 3).value == 0.0);
}

TEST_CASE("distortion_bounds: Hamming cube into l_2 is pinned") {
  BoundsOptions opts;
  opts.embedding = hamming_identity_embedding(2, 2.0);
  const DistortionBounds b = distortion_bounds(hamming_cube(2), "hamming:2", 2, 2, 1, opts);
  REQUIRE(b.upper.has_value());
  CHECK(b.jv_lower.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b.upper->distortion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b.best_lower() <= b.upper->distortion + 1e-12);
}

TEST_CASE("distortion_bounds: lower never exceeds the Frechet upper bound") {
  for (const MultiGraph& g : small_graphs()) {
    const DistortionBounds b = distortion_bounds(g, "g", 2, 2, 1);
    REQUIRE(b.upper.has_value());
    CHECK(b.gn_lower.certified);
    CHECK(b.best_lower() <= b.upper->distortion + 1e-9);
  }
}

TEST_CASE("hamming_sweep at p = 2") {
  const auto rows = hamming_sweep(2, 5, 2.0);
  REQUIRE(rows.size() == 4);
  for (const SweepRow& r : rows) {
    CHECK(r.diam == r.n);
    CHECK(r.certified);
    CHECK(r.lower_jv == doctest::Approx(std::sqrt(r.n)).epsilon(1e-12));
    CHECK(r.upper == doctest::Approx(std::sqrt(r.n)).epsilon(1e-12));
    CHECK(r.target_order == doctest::Approx(std::sqrt(r.n)).epsilon(1e-12));
  }
}

TEST_CASE("CoarseUnion") {
  const CoarseUnion two = CoarseUnion::build({complete_graph(2), complete_graph(2)});
  CHECK(two.size() == 4);
  CHECK(two.cross_distance(0, 1) == 5);
  CHECK(two.distance(0, 1) == 1);
  CHECK(two.distance(1, 2) == 5);

  const CoarseUnion one = CoarseUnion::build({cycle_graph(6)});
  const MetricTable c6 = all_pairs_distances(cycle_graph(6));
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) CHECK(one.distance(u, v) == c6(u, v));

  const CoarseUnion mixed = CoarseUnion::build({complete_graph(2), cycle_graph(4), cycle_graph(6)});
  CHECK(mixed.cross_distance(1, 2) == 2 + 3 + 2 + 3);
  CHECK(mixed.offset(2) == 6);

  // Triangle inequality over all triples.
  for (int x = 0; x < mixed.size(); ++x)
    for (int y = 0; y < mixed.size(); ++y)
      for (int z = 0; z < mixed.size(); ++z)
        CHECK(mixed.distance(x, z) <= mixed.distance(x, y) + mixed.distance(y, z));

  const std::array split{Edge{0, 1, 1}, Edge{2, 3, 1}};
  CHECK_THROWS_AS(CoarseUnion::build({build_graph(4, split)}), std::invalid_argument);
}

TEST_CASE("austin_exclude") {
  std::vector<double> diams, lower;
  for (int n = 2; n <= 10; ++n) {
    diams.push_back(n);
    lower.push_back(std::sqrt(n));
  }
  CHECK(austin_exclude(diams, lower, [](double t) { return std::pow(t, 0.75); }).verdict == Verdict::excluded);
  CHECK(austin_exclude(diams, lower, [](double t) { return std::pow(t, 0.25); }).verdict == Verdict::not_excluded);
  const AustinReport bad = austin_exclude(diams, lower, [](double t) { return std::sin(t) + 2; });
  CHECK(bad.verdict == Verdict::inconclusive);
  CHECK_FALSE(bad.reason.empty());
  CHECK(austin_exclude(diams, lower, [](double t) { return t * t; }).verdict == Verdict::inconclusive);

  std::vector<double> linear(diams.begin(), diams.end());
  CHECK(austin_exclude(diams, linear, [](double t) { return t; }).verdict == Verdict::excluded);
}

TEST_CASE("mode names round trip") {
  for (DisplacementMode m : {DisplacementMode::brute, DisplacementMode::heuristic, DisplacementMode::matching,
                             DisplacementMode::cayley})
    CHECK(parse_displacement_mode(to_string(m)) == m);
  CHECK_FALSE(parse_displacement_mode("greedy").has_value());
}
