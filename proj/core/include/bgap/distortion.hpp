#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgap/graph.hpp"
#include "bgap/groups.hpp"
#include "bgap/spectral.hpp"

namespace bgap {

struct MapDistortion {
  double distortion = 1.0;
  double lipschitz = 0.0;     ///< max ||f(u)-f(v)||_q / d(u,v)
  double co_lipschitz = 0.0;  ///< max d(u,v) / ||f(u)-f(v)||_q
  /// Set when q = 2 and all coordinates are integers: distortion^2 as a
  /// reduced fraction, computed without rounding.
  bool exact = false;
  std::int64_t squared_num = 0;
  std::int64_t squared_den = 1;
};

/// Exact all-pairs distortion of f : V -> l_q^d, q = f.q. Throws
/// std::invalid_argument if f is not injective or the shape is wrong.
MapDistortion map_distortion(const MultiGraph& g, const VectorMap& f);

/// Explicit embeddings used as upper bounds.
VectorMap hamming_identity_embedding(int n, double q);
VectorMap cycle_polygon_embedding(int n, double q);
/// v -> (d(v, w))_w, isometric into l_inf and injective.
VectorMap frechet_embedding(const MetricTable& metric, double q);

struct REps {
  double value = 0.0;
  int radius = 0;             ///< ball rule radius or exact subset diameter
  std::vector<int> witness;   ///< ball center (lower) or the optimal subset (exact)
  int threshold = 0;          ///< required subset size ceil(eps |V|)
};

/// Size of the smallest subset counted by r_eps: ceil(eps |V|).
int r_eps_threshold(int n, double eps);

/// min_v (smallest r with |B(v, r)| >= eps |V|) / diam, a lower bound on r_eps.
REps r_eps_lower(const MetricTable& metric, double eps);

/// min over subsets A with |A| >= eps |V| of diam(A) / diam. |V| <= 16.
REps r_eps_exact(const MetricTable& metric, double eps);

enum class DisplacementMode { brute, heuristic, matching, cayley };
std::string_view to_string(DisplacementMode mode);
std::optional<DisplacementMode> parse_displacement_mode(std::string_view name);

struct Displacement {
  int value = 0;
  std::vector<int> perm;
  DisplacementMode mode = DisplacementMode::brute;
  bool exact = false;  ///< false: value is only a lower bound on D(G)
};

struct DisplacementOptions {
  std::uint64_t seed = 0;
  int trials = 64;
  /// Regular action whose Schreier graph is G; required by cayley mode.
  const PermutationAction* action = nullptr;
};

/// D(G) = max over permutations a of min_v d(v, a v).
///   brute: enumeration, |V| <= 8;  matching: binary search over thresholds
///   with a perfect-matching test, exact;  heuristic: random permutations
///   plus greedy swaps;  cayley: translation by a farthest element of the
///   supplied action.
Displacement max_displacement(const MetricTable& metric, DisplacementMode mode,
                              const DisplacementOptions& opts = {});

struct LowerBound {
  double value = 0.0;
  bool certified = false;  ///< false when the gap is only an upper estimate
};

/// ((1-eps)^{1/p} r_eps / 2) diam (lambda / Delta)^{1/p}
LowerBound gn_bound(const MultiGraph& g, const MetricTable& metric, const GapEstimate& gap,
                    double eps, double r_eps);

/// 2^{-(p-1)/p} D (lambda / k)^{1/p}, k the average degree.
LowerBound jv_bound(const MultiGraph& g, const GapEstimate& gap, double displacement);

struct DistortionBounds {
  std::string graph;
  double p = 2.0;
  double q = 2.0;
  int d = 1;
  GapEstimate gap;
  double eps = 0.5;
  REps r_eps;
  bool r_eps_exact = false;
  LowerBound gn_lower;
  Displacement displacement;
  LowerBound jv_lower;
  std::optional<MapDistortion> upper;
  std::string upper_description;

  double best_lower() const { return std::max(gn_lower.value, jv_lower.value); }
};

struct BoundsOptions {
  double eps = 0.5;
  DescentOptions descent;
  DisplacementOptions displacement;
  /// Mode for D(G). Default: cayley with an action, brute up to 8
  /// vertices, heuristic above 1024, matching otherwise.
  std::optional<DisplacementMode> mode;
  /// Embedding for the upper bound; the Frechet embedding when absent.
  std::optional<VectorMap> embedding;
  std::string embedding_name;
};

DistortionBounds distortion_bounds(const MultiGraph& g, std::string name, double p, double q,
                                   int d, const BoundsOptions& opts = {});

/// One row of a Hamming cube sweep into l_p.
struct SweepRow {
  int n = 0;
  int diam = 0;
  double lower_gn = 0.0;
  double lower_jv = 0.0;
  double upper = 0.0;
  double target_order = 0.0;  ///< n^{1-1/p} for p < 2, n^{1/2} otherwise
  bool certified = false;
};

std::vector<SweepRow> hamming_sweep(int n_min, int n_max, double p, const DescentOptions& opts = {});

/// Metric on the disjoint union: the path metric inside components and
/// diam_i + diam_j + (i+1) + (j+1) between components i != j.
class CoarseUnion {
 public:
  /// Throws std::invalid_argument on a disconnected component and
  /// std::logic_error if the assembled metric breaks the triangle inequality.
  static CoarseUnion build(std::vector<MultiGraph> components);

  int size() const { return total_; }
  int components() const { return static_cast<int>(parts_.size()); }
  int offset(int component) const { return offsets_[static_cast<std::size_t>(component)]; }
  int component_diameter(int component) const { return metrics_[static_cast<std::size_t>(component)].diameter(); }
  int cross_distance(int i, int j) const;
  /// Distance between global vertex indices.
  int distance(int x, int y) const;
  const MultiGraph& component(int i) const { return parts_[static_cast<std::size_t>(i)]; }

 private:
  std::pair<int, int> locate(int x) const;

  std::vector<MultiGraph> parts_;
  std::vector<MetricTable> metrics_;
  std::vector<int> offsets_;
  int total_ = 0;
};

enum class Verdict { excluded, not_excluded, inconclusive };
std::string_view to_string(Verdict v);

struct AustinReport {
  Verdict verdict = Verdict::inconclusive;
  double slope = 0.0;          ///< log-log slope of c_lower rho(diam) / diam
  std::vector<double> ratios;
  std::string reason;
};

/// Tests whether the ratio c_lower * rho(diam) / diam grows along the family,
/// after checking on the sampled range that rho is nondecreasing, increases,
/// and has rho(t)/t nonincreasing.
AustinReport austin_exclude(std::span<const double> diams, std::span<const double> c_lower,
                            const std::function<double(double)>& rho);

}  // namespace bgap
