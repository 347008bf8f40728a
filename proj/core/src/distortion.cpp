#include "bgap/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bgap/generators.hpp"
#include "bgap/parallel.hpp"
#include "matching.hpp"
#include "seeding.hpp"

namespace bgap {

namespace {

double q_distance(const Eigen::MatrixXd& x, int u, int v, double q) {
  if (q == 2.0) return (x.row(u) - x.row(v)).norm();
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) s += std::pow(std::abs(x(u, j) - x(v, j)), q);
  return std::pow(s, 1.0 / q);
}

// Coordinates small enough that every product below fits in 64 bits.
bool integral_coordinates(const Eigen::MatrixXd& x) {
  if (x.cols() > 64) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = x.data()[i];
    if (c != std::round(c) || std::abs(c) > 32768.0) return false;
  }
  return true;
}

// a/b, compared and reduced exactly.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool greater_than(const Fraction& o) const { return num * o.den > o.num * den; }
};

}  // namespace

MapDistortion map_distortion(const MultiGraph& g, const VectorMap& f) {
  const int n = g.num_vertices();
  if (f.rows() != n || f.dim() < 1) throw std::invalid_argument("map_distortion: wrong map shape");
  if (!std::isfinite(f.q) || f.q < 1.0) throw std::invalid_argument("map_distortion: need q >= 1");
  const MetricTable metric = all_pairs_distances(g);
  MapDistortion out;
  if (n < 2) return out;

  struct RowResult {
    double lip = 0.0;
    double co = 0.0;
    Fraction lip_exact;  // max |f u - f v|^2 / d^2
    Fraction co_exact;   // max d^2 / |f u - f v|^2
    bool collision = false;
  };
  const bool exact = f.q == 2.0 && integral_coordinates(f.values);
  std::vector<RowResult> rows(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
    const int u = static_cast<int>(ui);
    RowResult& r = rows[ui];
    for (int v = u + 1; v < n; ++v) {
      const double d = metric(u, v);
      const double dist = q_distance(f.values, u, v, f.q);
      if (dist == 0.0) {
        r.collision = true;
        return;
      }
      r.lip = std::max(r.lip, dist / d);
      r.co = std::max(r.co, d / dist);
      if (exact) {
        std::int64_t sq = 0;
        for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
          const auto diff = static_cast<std::int64_t>(f.values(u, j) - f.values(v, j));
          sq += diff * diff;
        }
        const auto d2 = static_cast<std::int64_t>(d) * static_cast<std::int64_t>(d);
        const Fraction a{sq, d2};
        const Fraction b{d2, sq};
        if (a.greater_than(r.lip_exact)) r.lip_exact = a;
        if (b.greater_than(r.co_exact)) r.co_exact = b;
      }
    }
  });
  Fraction lip_exact;
  Fraction co_exact;
  for (const auto& r : rows) {
    if (r.collision) throw std::invalid_argument("map_distortion: map is not injective");
    out.lipschitz = std::max(out.lipschitz, r.lip);
    out.co_lipschitz = std::max(out.co_lipschitz, r.co);
    if (r.lip_exact.greater_than(lip_exact)) lip_exact = r.lip_exact;
    if (r.co_exact.greater_than(co_exact)) co_exact = r.co_exact;
  }
  out.distortion = out.lipschitz * out.co_lipschitz;
  if (exact) {
    std::int64_t num = lip_exact.num * co_exact.num;
    std::int64_t den = lip_exact.den * co_exact.den;
    const std::int64_t div = std::gcd(num, den);
    out.exact = true;
    out.squared_num = num / div;
    out.squared_den = den / div;
    out.distortion = std::sqrt(static_cast<double>(out.squared_num) / static_cast<double>(out.squared_den));
  }
  return out;
}

VectorMap hamming_identity_embedding(int n, double q) {
  if (n < 1 || n > 20) throw std::invalid_argument("hamming_identity_embedding: need 1 <= n <= 20");
  const int size = 1 << n;
  VectorMap f;
  f.values.resize(size, n);
  for (int x = 0; x < size; ++x) {
    for (int i = 0; i < n; ++i) f.values(x, i) = (x >> i) & 1;
  }
  f.q = q;
  return f;
}

VectorMap cycle_polygon_embedding(int n, double q) {
  if (n < 3) throw std::invalid_argument("cycle_polygon_embedding: need n >= 3");
  VectorMap f;
  f.values.resize(n, 2);
  for (int v = 0; v < n; ++v) {
    const double t = 2.0 * std::numbers::pi * v / n;
    f.values(v, 0) = std::cos(t);
    f.values(v, 1) = std::sin(t);
  }
  f.q = q;
  return f;
}

VectorMap frechet_embedding(const MetricTable& metric, double q) {
  const int n = metric.size();
  VectorMap f;
  f.values.resize(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) f.values(u, v) = metric(u, v);
  }
  f.q = q;
  return f;
}

int r_eps_threshold(int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("r_eps: need 0 < eps < 1");
  return std::max(1, static_cast<int>(std::ceil(eps * n - 1e-12)));
}

REps r_eps_lower(const MetricTable& metric, double eps) {
  const int n = metric.size();
  REps out;
  out.threshold = r_eps_threshold(n, eps);
  out.radius = std::numeric_limits<int>::max();
  for (int v = 0; v < n; ++v) {
    std::vector<int> row(metric.row(v).begin(), metric.row(v).end());
    std::nth_element(row.begin(), row.begin() + (out.threshold - 1), row.end());
    const int r = row[static_cast<std::size_t>(out.threshold - 1)];
    if (r < out.radius) {
      out.radius = r;
      out.witness = {v};
    }
  }
  out.value = metric.diameter() > 0 ? static_cast<double>(out.radius) / metric.diameter() : 0.0;
  return out;
}

REps r_eps_exact(const MetricTable& metric, double eps) {
  const int n = metric.size();
  if (n > 16) throw std::invalid_argument("r_eps_exact: need |V| <= 16");
  const int k = r_eps_threshold(n, eps);
  // Supersets never have smaller diameter, so subsets of size exactly k suffice.
  int best = metric.diameter();
  std::vector<int> best_set;
  std::vector<int> chosen;
  std::function<void(int, int)> extend = [&](int next, int current) {
    if (current >= best && !best_set.empty()) return;
    if (static_cast<int>(chosen.size()) == k) {
      if (best_set.empty() || current < best) {
        best = current;
        best_set = chosen;
      }
      return;
    }
    for (int v = next; v <= n - (k - static_cast<int>(chosen.size())); ++v) {
      int widened = current;
      for (int u : chosen) widened = std::max(widened, metric(u, v));
      if (widened >= best && !best_set.empty()) continue;
      chosen.push_back(v);
      extend(v + 1, widened);
      chosen.pop_back();
    }
  };
  extend(0, 0);
  REps out;
  out.threshold = k;
  out.radius = best;
  out.witness = best_set;
  out.value = metric.diameter() > 0 ? static_cast<double>(best) / metric.diameter() : 0.0;
  return out;
}

std::string_view to_string(DisplacementMode mode) {
  switch (mode) {
    case DisplacementMode::brute: return "brute";
    case DisplacementMode::heuristic: return "heuristic";
    case DisplacementMode::matching: return "matching";
    case DisplacementMode::cayley: return "cayley";
  }
  return "unknown";
}

std::optional<DisplacementMode> parse_displacement_mode(std::string_view name) {
  for (auto m : {DisplacementMode::brute, DisplacementMode::heuristic, DisplacementMode::matching,
                 DisplacementMode::cayley}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

int min_displacement(const MetricTable& metric, const std::vector<int>& perm) {
  int worst = std::numeric_limits<int>::max();
  for (int v = 0; v < metric.size(); ++v) worst = std::min(worst, metric(v, perm[static_cast<std::size_t>(v)]));
  return worst;
}

Displacement brute_displacement(const MetricTable& metric) {
  const int n = metric.size();
  if (n > 8) throw std::invalid_argument("max_displacement: brute mode needs |V| <= 8");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Displacement out;
  out.mode = DisplacementMode::brute;
  out.exact = true;
  out.value = -1;
  do {
    const int v = min_displacement(metric, perm);
    if (v > out.value) {
      out.value = v;
      out.perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// A permutation with d(v, a v) >= t for all v, if one exists.
std::optional<std::vector<int>> displacing_permutation(const MetricTable& metric, int t) {
  const int n = metric.size();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    for (int w = 0; w < n; ++w) {
      if (metric(v, w) >= t) adj[static_cast<std::size_t>(v)].push_back(w);
    }
  }
  const auto match = detail::bipartite_matching(adj, n);
  if (std::find(match.begin(), match.end(), -1) != match.end()) return std::nullopt;
  return match;
}

Displacement matching_displacement(const MetricTable& metric) {
  Displacement out;
  out.mode = DisplacementMode::matching;
  out.exact = true;
  std::vector<int> identity(static_cast<std::size_t>(metric.size()));
  std::iota(identity.begin(), identity.end(), 0);
  out.perm = identity;
  out.value = 0;
  int lo = 1;
  int hi = metric.diameter();
  while (lo <= hi) {
    const int mid = lo + (hi - lo) / 2;
    if (auto perm = displacing_permutation(metric, mid)) {
      out.value = mid;
      out.perm = std::move(*perm);
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return out;
}

Displacement heuristic_displacement(const MetricTable& metric, const DisplacementOptions& opts) {
  const int n = metric.size();
  Displacement out;
  out.mode = DisplacementMode::heuristic;
  out.value = -1;
  auto score = [&](const std::vector<int>& perm) {
    int lowest = std::numeric_limits<int>::max();
    int count = 0;
    for (int v = 0; v < n; ++v) {
      const int d = metric(v, perm[static_cast<std::size_t>(v)]);
      if (d < lowest) {
        lowest = d;
        count = 1;
      } else if (d == lowest) {
        ++count;
      }
    }
    return std::pair{lowest, -count};
  };
  const int trials = std::max(1, opts.trials);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::stream_seed(opts.seed, static_cast<std::uint64_t>(t)));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto current = score(perm);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n && !improved; ++i) {
        for (int j = i + 1; j < n; ++j) {
          std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
          const auto candidate = score(perm);
          if (candidate > current) {
            current = candidate;
            improved = true;
            break;
          }
          std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
      }
    }
    if (current.first > out.value) {
      out.value = current.first;
      out.perm = perm;
    }
  }
  return out;
}

Displacement cayley_displacement(const MetricTable& metric, const DisplacementOptions& opts) {
  if (opts.action == nullptr) throw std::invalid_argument("max_displacement: cayley mode needs an action");
  const PermutationAction& a = *opts.action;
  const int n = metric.size();
  if (a.size() != n) throw std::invalid_argument("max_displacement: action size differs from |V|");

  // Word from vertex 0 to a farthest vertex, read off a BFS tree.
  std::vector<int> via(static_cast<std::size_t>(n), -1);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (int g = 0; g < static_cast<int>(a.generators().size()); ++g) {
      const int y = a.generators()[static_cast<std::size_t>(g)].perm[static_cast<std::size_t>(x)];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        via[static_cast<std::size_t>(y)] = g;
        parent[static_cast<std::size_t>(y)] = x;
        queue.push_back(y);
      }
    }
  }
  if (static_cast<int>(queue.size()) != n) throw std::invalid_argument("max_displacement: action is not transitive");
  int target = 0;
  for (int v = 0; v < n; ++v) {
    if (metric(0, v) > metric(0, target)) target = v;
  }
  std::vector<int> word;  // generators applied first to last
  for (int v = target; v != 0; v = parent[static_cast<std::size_t>(v)]) word.push_back(via[static_cast<std::size_t>(v)]);
  std::reverse(word.begin(), word.end());

  Displacement out;
  out.mode = DisplacementMode::cayley;
  out.perm.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int x = v;
    for (int g : word) x = a.generators()[static_cast<std::size_t>(g)].perm[static_cast<std::size_t>(x)];
    out.perm[static_cast<std::size_t>(v)] = x;
  }
  out.value = min_displacement(metric, out.perm);
  // D(G) <= diam, so attaining the diameter settles the value.
  out.exact = out.value == metric.diameter();
  return out;
}

}  // namespace

Displacement max_displacement(const MetricTable& metric, DisplacementMode mode,
                              const DisplacementOptions& opts) {
  if (metric.size() < 1) throw std::invalid_argument("max_displacement: empty metric");
  switch (mode) {
    case DisplacementMode::brute: return brute_displacement(metric);
    case DisplacementMode::heuristic: return heuristic_displacement(metric, opts);
    case DisplacementMode::matching: return matching_displacement(metric);
    case DisplacementMode::cayley: return cayley_displacement(metric, opts);
  }
  throw std::invalid_argument("max_displacement: unknown mode");
}

LowerBound gn_bound(const MultiGraph& g, const MetricTable& metric, const GapEstimate& gap,
                    double eps, double r_eps) {
  const double p = gap.p;
  LowerBound out;
  out.value = std::pow(1.0 - eps, 1.0 / p) * r_eps / 2.0 * metric.diameter() *
              std::pow(std::max(gap.value, 0.0) / g.max_degree(), 1.0 / p);
  out.certified = gap.bound_kind == BoundKind::exact;
  return out;
}

LowerBound jv_bound(const MultiGraph& g, const GapEstimate& gap, double displacement) {
  const double p = gap.p;
  LowerBound out;
  out.value = std::pow(2.0, -(p - 1.0) / p) * displacement *
              std::pow(std::max(gap.value, 0.0) / g.average_degree(), 1.0 / p);
  out.certified = gap.bound_kind == BoundKind::exact;
  return out;
}

DistortionBounds distortion_bounds(const MultiGraph& g, std::string name, double p, double q, int d,
                                   const BoundsOptions& opts) {
  require_connected(g, "distortion_bounds");
  const MetricTable metric = all_pairs_distances(g);
  DistortionBounds out;
  out.graph = std::move(name);
  out.p = p;
  out.q = q;
  out.d = d;
  out.eps = opts.eps;
  out.gap = best_gap(g, p, q, d, opts.descent);
  out.r_eps_exact = g.num_vertices() <= 16;
  out.r_eps = out.r_eps_exact ? r_eps_exact(metric, opts.eps) : r_eps_lower(metric, opts.eps);
  out.gn_lower = gn_bound(g, metric, out.gap, opts.eps, out.r_eps.value);

  DisplacementMode mode = DisplacementMode::matching;
  if (opts.mode) {
    mode = *opts.mode;
  } else if (opts.displacement.action != nullptr) {
    mode = DisplacementMode::cayley;
  } else if (g.num_vertices() <= 8) {
    mode = DisplacementMode::brute;
  } else if (g.num_vertices() > 1024) {
    mode = DisplacementMode::heuristic;
  }
  out.displacement = max_displacement(metric, mode, opts.displacement);
  out.jv_lower = jv_bound(g, out.gap, out.displacement.value);

  if (g.num_vertices() >= 2) {
    VectorMap f = opts.embedding ? *opts.embedding : frechet_embedding(metric, q);
    f.q = q;
    out.upper = map_distortion(g, f);
    out.upper_description = opts.embedding ? opts.embedding_name : "frechet";
  }
  return out;
}

std::vector<SweepRow> hamming_sweep(int n_min, int n_max, double p, const DescentOptions& opts) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("hamming_sweep: bad range");
  std::vector<SweepRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    // Lower bounds on the Schreier graph of (Z/2)^n, whose vertex numbering
    // matches the action; the upper bound on the bitmask-labelled cube.
    const PermutationAction action = action_from_group(GroupSpec{GroupKind::boolean_cube, n, 0});
    const MultiGraph g = schreier_graph(action);
    const MetricTable metric = all_pairs_distances(g);
    // l_p^1 = R carries the same gap as l_p under exponent-matched stabilization.
    const GapEstimate gap = best_gap(g, p, p, 1, opts);
    DisplacementOptions dopts;
    dopts.action = &action;
    const Displacement disp = max_displacement(metric, DisplacementMode::cayley, dopts);
    const REps r = r_eps_lower(metric, 0.5);
    SweepRow row;
    row.n = n;
    row.diam = metric.diameter();
    row.lower_gn = gn_bound(g, metric, gap, 0.5, r.value).value;
    row.lower_jv = jv_bound(g, gap, disp.value).value;
    row.upper = map_distortion(hamming_cube(n), hamming_identity_embedding(n, p)).distortion;
    row.target_order = p < 2.0 ? std::pow(n, 1.0 - 1.0 / p) : std::sqrt(static_cast<double>(n));
    row.certified = gap.bound_kind == BoundKind::exact && disp.exact;
    rows.push_back(row);
  }
  return rows;
}

CoarseUnion CoarseUnion::build(std::vector<MultiGraph> components) {
  CoarseUnion u;
  for (const auto& g : components) {
    require_connected(g, "coarse_union");
    u.metrics_.push_back(all_pairs_distances(g));
    u.offsets_.push_back(u.total_);
    u.total_ += g.num_vertices();
  }
  u.parts_ = std::move(components);
  const int c = u.components();
  for (int a = 0; a < c; ++a) {
    for (int b = 0; b < c; ++b) {
      if (a == b) continue;
      if (u.component_diameter(a) > 2 * u.cross_distance(a, b)) {
        throw std::logic_error("coarse_union: triangle inequality fails inside a component");
      }
      for (int m = 0; m < c; ++m) {
        if (m == a || m == b) continue;
        if (u.cross_distance(a, b) > u.cross_distance(a, m) + u.cross_distance(m, b)) {
          throw std::logic_error("coarse_union: triangle inequality fails across components");
        }
      }
    }
  }
  return u;
}

int CoarseUnion::cross_distance(int i, int j) const {
  if (i == j) throw std::invalid_argument("cross_distance: same component");
  return component_diameter(i) + component_diameter(j) + (i + 1) + (j + 1);
}

std::pair<int, int> CoarseUnion::locate(int x) const {
  if (x < 0 || x >= total_) throw std::out_of_range("coarse_union: vertex out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), x);
  const int comp = static_cast<int>(it - offsets_.begin()) - 1;
  return {comp, x - offsets_[static_cast<std::size_t>(comp)]};
}

int CoarseUnion::distance(int x, int y) const {
  const auto [cx, vx] = locate(x);
  const auto [cy, vy] = locate(y);
  if (cx == cy) return metrics_[static_cast<std::size_t>(cx)](vx, vy);
  return cross_distance(cx, cy);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::excluded: return "excluded";
    case Verdict::not_excluded: return "not_excluded";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

AustinReport austin_exclude(std::span<const double> diams, std::span<const double> c_lower,
                            const std::function<double(double)>& rho) {
  AustinReport out;
  if (diams.size() != c_lower.size() || diams.size() < 2) {
    out.reason = "need at least two family members with matching lower bounds";
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(diams.begin(), diams.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(lo > 0.0) || !(hi > lo)) {
    out.reason = "diameters must be positive and not all equal";
    return out;
  }

  constexpr int kSamples = 256;
  double prev_value = rho(lo);
  double prev_slope = prev_value / lo;
  for (int i = 1; i <= kSamples; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / kSamples);
    const double value = rho(t);
    const double slope = value / t;
    const double slack = 1e-12 * std::max(1.0, std::abs(value));
    if (!std::isfinite(value) || value < prev_value - slack) {
      out.reason = "rho is not nondecreasing on the sampled range";
      return out;
    }
    if (slope > prev_slope * (1.0 + 1e-12) + 1e-15) {
      out.reason = "rho(t)/t is not nonincreasing on the sampled range";
      return out;
    }
    prev_value = value;
    prev_slope = slope;
  }
  if (!(rho(hi) > rho(lo))) {
    out.reason = "rho does not increase on the sampled range";
    return out;
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < diams.size(); ++i) {
    const double r = c_lower[i] * rho(diams[i]) / diams[i];
    out.ratios.push_back(r);
    if (!(r > 0.0)) {
      out.reason = "nonpositive ratio";
      return out;
    }
    xs.push_back(std::log(diams[i]));
    ys.push_back(std::log(r));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  const bool grows = out.ratios.back() > out.ratios.front();
  out.verdict = out.slope > 1e-2 && grows ? Verdict::excluded : Verdict::not_excluded;
  out.reason = out.verdict == Verdict::excluded ? "ratio grows along the family"
                                                : "ratio does not grow along the family";
  return out;
}

}  // namespace bgap
