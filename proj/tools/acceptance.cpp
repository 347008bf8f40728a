#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bgap/distortion.hpp"
#include "bgap/generators.hpp"
#include "bgap/graph.hpp"
#include "bgap/groups.hpp"
#include "bgap/gross.hpp"
#include "bgap/mazur.hpp"
#include "bgap/spectral.hpp"

namespace bgap::cli {

namespace {

// Tolerances and runtime caps.
constexpr double kExactGapRel = 1e-9;
constexpr double kCap1 = 1.0;
constexpr double kOracleAbsFloor = 1e-3;
constexpr double kCap2 = 60.0;
constexpr double kStabilizationRel = 1e-2;
constexpr double kSandwichRel = 1e-2;
constexpr double kHammingEqualityRel = 5e-2;
constexpr double kKappaAbs = 1e-3;
constexpr double kGrossGapRel = 1e-9;
constexpr double kCap6 = 60.0;
constexpr long long kMazurPairs = 100000;
constexpr double kRoundTripAbs = 1e-10;
constexpr double kSqrtNRel = 1e-12;
constexpr double kUpperRel = 1e-9;
// jv / upper must lie in (0, 1 + kBandSlack] with max/min <= kBandSpread.
// The slack covers the optimizer's overshoot of lambda_1 at p < 2.
constexpr double kBandSlack = 1e-6;
constexpr double kBandSpread = 2.0;
constexpr double kMatousekSpread = 10.0;
constexpr double kLockRel = 5e-2;
constexpr double kCap10 = 1.0;

// Frozen from the first run of criterion 9 (min and max ratio per exponent).
constexpr double kLockP3Min = 0.620290;
constexpr double kLockP3Max = 0.988175;
constexpr double kLockP15Min = 0.838913;
constexpr double kLockP15Max = 1.458339;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double rel_err(double value, double target) {
  return std::abs(value - target) / std::max(std::abs(target), 1e-300);
}

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++total_;
    if (!ok) {
      ++failed_;
      if (failures_.size() < 4) failures_.push_back(what);
    }
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }
  bool passed() const { return failed_ == 0; }

  std::string detail() const {
    std::string out = fmt("%d/%d checks", total_ - failed_, total_);
    for (const auto& n : notes_) out += "; " + n;
    if (!failures_.empty()) {
      out += "; failed:";
      for (const auto& f : failures_) out += " [" + f + "]";
      if (failed_ > static_cast<int>(failures_.size())) out += fmt(" +%d more", failed_ - static_cast<int>(failures_.size()));
    }
    return out;
  }

 private:
  int total_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

MultiGraph small_graph(int n, std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1});
  return MultiGraph::build(n, edges);
}

// ---------------------------------------------------------------------------

void criterion1(Tally& t) {
  const auto t0 = Clock::now();
  for (int n = 2; n <= 10; ++n) {
    const double v = gap_exact_2(complete_graph(n)).value;
    t.check(rel_err(v, n) <= kExactGapRel, fmt("K%d: %.12g", n, v));
  }
  for (int n = 3; n <= 32; ++n) {
    const double s = std::sin(std::numbers::pi / n);
    const double v = gap_exact_2(cycle_graph(n)).value;
    t.check(rel_err(v, 4 * s * s) <= kExactGapRel, fmt("C%d: %.12g", n, v));
  }
  for (int n = 1; n <= 8; ++n) {
    const double v = gap_exact_2(hamming_cube(n)).value;
    t.check(rel_err(v, 2.0) <= kExactGapRel, fmt("H%d: %.12g", n, v));
  }
  const double secs = since(t0);
  t.check(secs < kCap1, fmt("runtime %.2f s", secs));
}

void criterion2(Tally& t) {
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, MultiGraph>> graphs = {
      {"K2", small_graph(2, {{0, 1}})},
      {"P3", small_graph(3, {{0, 1}, {1, 2}})},
      {"K3", small_graph(3, {{0, 1}, {1, 2}, {0, 2}})},
      {"P4", small_graph(4, {{0, 1}, {1, 2}, {2, 3}})},
      {"star", small_graph(4, {{0, 1}, {0, 2}, {0, 3}})},
      {"C4", small_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})},
      {"paw", small_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})},
      {"diamond", small_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}})},
      {"K4", complete_graph(4)},
  };
  double worst = 0.0;
  for (const auto& [name, g] : graphs) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const GapEstimate oracle = gap_oracle_small(g, p);
      const GapEstimate est = gap_estimate(g, p, 2.0, 1);
      const double diff = std::abs(est.value - oracle.value);
      const double tol = std::max(kOracleAbsFloor, oracle.diagnostics.error_bound);
      worst = std::max(worst, diff);
      t.check(diff <= tol, fmt("%s p=%g: estimate %.9g oracle %.9g", name, p, est.value, oracle.value));
    }
  }
  const double secs = since(t0);
  t.note(fmt("%zu graphs, worst |diff| %.2e", graphs.size(), worst));
  t.check(secs < kCap2, fmt("runtime %.1f s", secs));
}

void criterion3(Tally& t) {
  const std::vector<std::pair<const char*, MultiGraph>> graphs = {
      {"C6", cycle_graph(6)}, {"K4", complete_graph(4)}, {"H3", hamming_cube(3)}};
  DescentOptions opts;
  opts.restarts = 16;
  opts.max_iter = 3000;
  double worst = 0.0;
  for (const auto& [name, g] : graphs) {
    for (double p : {1.5, 2.0, 3.0}) {
      const double ref = best_gap(g, p, 2.0, 1, opts).value;
      for (int d : {1, 2, 4}) {
        const double lp = gap_estimate(g, p, p, d, opts).value;
        const double l2 = best_gap(g, p, 2.0, d, opts).value;
        worst = std::max({worst, rel_err(lp, ref), rel_err(l2, ref)});
        t.check(rel_err(lp, ref) <= kStabilizationRel,
                fmt("%s p=%g l_p^%d: %.6g vs %.6g", name, p, d, lp, ref));
        t.check(rel_err(l2, ref) <= kStabilizationRel,
                fmt("%s p=%g l_2^%d: %.6g vs %.6g", name, p, d, l2, ref));
      }
    }
  }
  t.note(fmt("worst relative deviation %.2e", worst));
}

void criterion4(Tally& t) {
  std::vector<GroupSpec> specs;
  for (int n = 5; n <= 8; ++n) specs.push_back({GroupKind::cyclic, n, 0});
  for (int n = 2; n <= 4; ++n) specs.push_back({GroupKind::boolean_cube, n, 0});
  specs.push_back({GroupKind::sl_mod, 2, 3});
  double equality_min = std::numeric_limits<double>::infinity();
  double equality_max = 0.0;
  for (const auto& spec : specs) {
    const PermutationAction a = action_from_group(spec);
    const std::vector<LabelMap> Q = standard_automorphisms(spec);
    const double nu = pak_zuk_nu(a, Q).nu;
    for (double p : {1.0, 2.0, 3.0}) {
      const KappaEstimate k = kappa_estimate(a, p, 0);
      const SandwichReport r = check_sandwich(k.value, k.gap, static_cast<int>(a.generators().size()),
                                              p, nu, kSandwichRel);
      const std::string where = spec.to_string() + fmt(" p=%g", p);
      t.check(r.lower_ok, where + fmt(": kappa^p %.6g > lambda %.6g", std::pow(k.value, p), k.gap));
      t.check(r.upper_ok, where + fmt(": lambda %.6g > |S|/2 kappa^p", k.gap));
      t.check(r.pak_zuk_ok, where + fmt(": Pak-Zuk side, nu=%g", nu));
      if (spec.kind == GroupKind::boolean_cube) {
        const double ratio = k.gap / (spec.n * std::pow(k.value, p));
        equality_min = std::min(equality_min, ratio);
        equality_max = std::max(equality_max, ratio);
        t.check(std::abs(ratio - 1.0) <= kHammingEqualityRel,
                where + fmt(": lambda / (n kappa^p) = %.4f", ratio));
      }
    }
  }
  t.note(fmt("Hamming lambda/(n kappa^p) in [%.4f, %.4f]", equality_min, equality_max));
}

void criterion5(Tally& t) {
  for (int n = 1; n <= 6; ++n) {
    const double h = kappa_estimate(action_from_group({GroupKind::boolean_cube, n, 0}), 2.0, 0).value;
    t.check(std::abs(h - std::sqrt(2.0 / n)) <= kKappaAbs,
            fmt("H%d: kappa %.6f vs sqrt(2/n) %.6f (2/sqrt(n) = %.6f)", n, h, std::sqrt(2.0 / n),
                2.0 / std::sqrt(n)));
  }
  for (int n = 2; n <= 6; ++n) {
    const double c = kappa_estimate(action_from_group({GroupKind::cyclic, n, 0}), 2.0, 0).value;
    const double target = 2.0 * std::sin(std::numbers::pi / n);
    t.check(std::abs(c - target) <= kKappaAbs, fmt("Z/%d: kappa %.6f vs %.6f", n, c, target));
  }
}

void criterion6(Tally& t, std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, MultiGraph>> graphs;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 100; ++i) {
    const int degree = 3 + i % 3;
    int n = std::uniform_int_distribution<int>(degree + 1, 50)(rng);
    if ((n * degree) % 2) n += n < 50 ? 1 : -1;
    const std::uint64_t s = rng();
    graphs.emplace_back(fmt("random_regular:%d:%d", n, degree), random_regular_graph(n, degree, s));
  }
  for (int n = 3; n <= 32; ++n) graphs.emplace_back(fmt("cycle:%d", n), cycle_graph(n));
  for (int n = 2; n <= 32; ++n) graphs.emplace_back(fmt("complete:%d", n), complete_graph(n));
  for (int n = 2; n <= 32; ++n) graphs.emplace_back(fmt("path:%d", n), path_graph(n));
  for (int n = 1; n <= 5; ++n) graphs.emplace_back(fmt("hamming:%d", n), hamming_cube(n));
  for (int n = 2; n * n <= 32; ++n) graphs.emplace_back(fmt("margulis:%d", n), margulis_graph(n));

  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& [name, g] = graphs[i];
    const SchreierSpec spec = schreier_realize(g, seed + i);
    const int want = 2 * g.max_degree();
    bool regular = spec.base.is_regular();
    for (int v = 0; v < spec.base.num_vertices(); ++v) regular = regular && spec.base.degree(v) == want;
    t.check(regular, name + ": regularization is not 2 Delta-regular");
    const RealizationCheck check = verify_realization(spec);
    t.check(check.ok, name + fmt(": realization differs (%zu missing, %zu extra)", check.missing.size(),
                                 check.extra.size()));
    t.check(schreier_graph(spec.action()) == realization_graph(g.num_vertices(), spec.factors.perms),
            name + ": action graph differs from realization");
    const double base = gap_exact_2(g).value;
    const double doubled = gap_exact_2(spec.base).value;
    t.check(rel_err(doubled, 2.0 * base) <= kGrossGapRel,
            name + fmt(": gap %.12g vs 2 x %.12g", doubled, base));
  }
  const double secs = since(t0);
  t.note(fmt("%zu graphs", graphs.size()));
  t.check(secs < kCap6, fmt("runtime %.1f s", secs));
}

void criterion7(Tally& t, std::uint64_t seed) {
  const Sampler samplers[] = {Sampler::uniform_sphere, Sampler::antipodal_pairs, Sampler::near_pairs};
  auto modulus = [](double r) {
    return r >= 2.0 ? PowerModulus{r / 2.0, 1.0} : PowerModulus{4.0, r / 2.0};
  };
  std::uint64_t stream = seed;
  double worst_base = 0.0;
  double worst_stab = 0.0;
  for (double r : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    for (int dim : {2, 16}) {
      const SphereMap phi = mazur(r, 2.0, dim);
      for (Sampler s : samplers) {
        const ModulusEstimate est = estimate_modulus(phi, s, kMazurPairs, ++stream, modulus(r));
        worst_base = std::max(worst_base, est.max_ratio);
        t.check(est.violations == 0, fmt("M_{%g,2} d=%d %s: %lld violations", r, dim,
                                         std::string(to_string(s)).c_str(), est.violations));
      }
      for (int k : {1, 4}) {
        for (double p : {2.0, 3.0}) {
          for (Sampler s : {Sampler::uniform_sphere, Sampler::near_pairs}) {
            const StabilizedCheck c =
                check_stabilized_modulus(phi, modulus(r), k, p, s, kMazurPairs, ++stream);
            worst_stab = std::max(worst_stab, c.max_ratio);
            t.check(c.violations == 0, fmt("stabilized M_{%g,2} d=%d k=%d p=%g: %lld violations", r,
                                           dim, k, p, c.violations));
          }
        }
      }
    }
  }
  double worst_trip = 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    for (double q : {1.0, 2.0, 3.0}) {
      for (int trial = 0; trial < 2000; ++trial) {
        Eigen::VectorXd x(8);
        for (auto& v : x) v = normal(rng);
        x /= lp_norm(x, p);
        const Eigen::VectorXd back = mazur_map(mazur_map(x, p, q), q, p);
        worst_trip = std::max(worst_trip, (back - x).cwiseAbs().maxCoeff());
      }
    }
  }
  t.check(worst_trip <= kRoundTripAbs, fmt("round trip error %.2e", worst_trip));
  t.note(fmt("max delta/bound %.4f (base), %.4f (stabilized); round trip %.1e", worst_base,
             worst_stab, worst_trip));
}

void criterion8(Tally& t) {
  for (int n = 2; n <= 8; ++n) {
    const MapDistortion m = map_distortion(hamming_cube(n), hamming_identity_embedding(n, 2.0));
    t.check(m.exact && m.squared_num == n && m.squared_den == 1,
            fmt("H%d: identity distortion^2 = %lld/%lld", n, static_cast<long long>(m.squared_num),
                static_cast<long long>(m.squared_den)));
  }
  for (const SweepRow& row : hamming_sweep(2, 8, 2.0)) {
    t.check(rel_err(row.lower_jv, std::sqrt(row.n)) <= kSqrtNRel && row.certified,
            fmt("H%d: jv %.15g vs sqrt(n)", row.n, row.lower_jv));
    t.check(rel_err(row.upper, std::sqrt(row.n)) <= kSqrtNRel, fmt("H%d: upper %.15g", row.n, row.upper));
  }
  DescentOptions opts;
  opts.restarts = 8;
  opts.max_iter = 3000;
  for (double p : {1.0, 1.5}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const SweepRow& row : hamming_sweep(2, 8, p, opts)) {
      const double target = std::pow(row.n, 1.0 - 1.0 / p);
      t.check(rel_err(row.upper, target) <= kUpperRel,
              fmt("p=%g H%d: upper %.12g vs n^(1-1/p) %.12g", p, row.n, row.upper, target));
      const double ratio = row.lower_jv / row.upper;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      t.check(ratio > 0.0 && ratio <= 1.0 + kBandSlack, fmt("p=%g H%d: jv/upper %.9f", p, row.n, ratio));
    }
    t.check(hi / lo <= kBandSpread, fmt("p=%g: jv/upper spread %.3f", p, hi / lo));
    t.note(fmt("p=%g jv/upper in [%.4f, %.4f]", p, lo, hi));
  }
}

void criterion9(Tally& t) {
  std::vector<MultiGraph> family;
  for (int n : {10, 20, 40, 60}) {
    for (std::uint64_t s = 1; s <= 3; ++s) family.push_back(random_regular_graph(n, 3, 1000 * n + s));
  }
  DescentOptions opts;
  opts.restarts = 8;
  opts.max_iter = 3000;
  const double exponents[] = {3.0, 1.5};
  const ExtrapolationReport report = extrapolation_report(family, exponents, opts);
  const double locks[2][2] = {{kLockP3Min, kLockP3Max}, {kLockP15Min, kLockP15Max}};
  for (std::size_t i = 0; i < report.per_exponent.size(); ++i) {
    const auto& s = report.per_exponent[i];
    t.check(s.max_ratio / s.min_ratio <= kMatousekSpread,
            fmt("p=%g: ratio spread %.3f", s.p, s.max_ratio / s.min_ratio));
    t.note(fmt("p=%g ratio in [%.6f, %.6f]", s.p, s.min_ratio, s.max_ratio));
    t.check(rel_err(s.min_ratio, locks[i][0]) <= kLockRel,
            fmt("p=%g: min %.6f drifted from lock %.6f", s.p, s.min_ratio, locks[i][0]));
    t.check(rel_err(s.max_ratio, locks[i][1]) <= kLockRel,
            fmt("p=%g: max %.6f drifted from lock %.6f", s.p, s.max_ratio, locks[i][1]));
  }
}

void criterion10(Tally& t) {
  const auto t0 = Clock::now();
  std::vector<double> diams;
  std::vector<double> lower;
  for (const SweepRow& row : hamming_sweep(2, 8, 2.0)) {
    diams.push_back(row.diam);
    lower.push_back(std::max(row.lower_gn, row.lower_jv));
  }
  const AustinReport hi = austin_exclude(diams, lower, [](double x) { return std::pow(x, 0.6); });
  const AustinReport lo = austin_exclude(diams, lower, [](double x) { return std::pow(x, 0.4); });
  t.check(hi.verdict == Verdict::excluded,
          fmt("t^0.6: %s (slope %.4f)", std::string(to_string(hi.verdict)).c_str(), hi.slope));
  t.check(lo.verdict != Verdict::excluded,
          fmt("t^0.4: %s (slope %.4f)", std::string(to_string(lo.verdict)).c_str(), lo.slope));
  t.note(fmt("slopes %.4f (t^0.6), %.4f (t^0.4)", hi.slope, lo.slope));
  const double secs = since(t0);
  t.check(secs < kCap10, fmt("runtime %.2f s", secs));
}

struct Entry {
  const char* name;
  std::function<void(Tally&, const AcceptanceOptions&)> body;
};

const Entry& entry(int id) {
  static const std::vector<Entry> entries = {
      {"exact p=2 gaps", [](Tally& t, const AcceptanceOptions&) { criterion1(t); }},
      {"oracle agreement", [](Tally& t, const AcceptanceOptions&) { criterion2(t); }},
      {"stabilization invariants", [](Tally& t, const AcceptanceOptions&) { criterion3(t); }},
      {"displacement sandwich and Pak-Zuk", [](Tally& t, const AcceptanceOptions&) { criterion4(t); }},
      {"closed-form kappa", [](Tally& t, const AcceptanceOptions&) { criterion5(t); }},
      {"Gross trick", [](Tally& t, const AcceptanceOptions& o) { criterion6(t, o.seed); }},
      {"Mazur moduli", [](Tally& t, const AcceptanceOptions& o) { criterion7(t, o.seed); }},
      {"Hamming distortion tightness", [](Tally& t, const AcceptanceOptions&) { criterion8(t); }},
      {"Matousek ratio boundedness", [](Tally& t, const AcceptanceOptions&) { criterion9(t); }},
      {"Austin exclusion", [](Tally& t, const AcceptanceOptions&) { criterion10(t); }},
  };
  if (id < 1 || id > kCriterionCount) throw std::out_of_range(fmt("no acceptance criterion %d", id));
  return entries[static_cast<std::size_t>(id - 1)];
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  const Entry& e = entry(id);
  CriterionResult result;
  result.id = id;
  result.name = e.name;
  const auto t0 = Clock::now();
  Tally tally;
  try {
    e.body(tally, opts);
    result.passed = tally.passed();
    result.detail = tally.detail();
  } catch (const std::exception& ex) {
    result.passed = false;
    result.detail = std::string("error: ") + ex.what();
  }
  result.seconds = since(t0);
  return result;
}

std::vector<CriterionResult> run_acceptance(std::span<const int> ids, const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s  %2d  %-36s (%7.2f s)  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
             r.seconds) +
         r.detail;
}

}  // namespace bgap::cli
