#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgap/graph.hpp"
#include "bgap/spectral.hpp"

namespace bgap {

/// A generator of a permutation action. `label == inverse_label` marks a
/// self-inverse generator, whose permutation must be an involution.
struct Generator {
  std::string label;
  std::string inverse_label;
  std::vector<int> perm;
};

/// A finite symmetric generating multiset of permutations of 0..m-1, read as
/// the left action of S on the cosets Gamma/H.
class PermutationAction {
 public:
  PermutationAction() = default;

  /// Validates that every entry is a permutation of 0..m-1, labels are
  /// unique, and each inverse label names a generator whose permutation is the
  /// inverse. Identity permutations are allowed here (free generators of the
  /// Gross construction may act trivially).
  static PermutationAction build(int m, std::vector<Generator> generators);

  int size() const { return m_; }
  const std::vector<Generator>& generators() const { return gens_; }
  std::optional<int> index_of(const std::string& label) const;
  int inverse_index(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
  /// True when the generated permutation group is transitive on 0..m-1.
  bool transitive() const;

  friend bool operator==(const PermutationAction& a, const PermutationAction& b);

 private:
  int m_ = 0;
  std::vector<Generator> gens_;
  std::vector<int> inverse_;
};

/// Vertices 0..m-1. A pair s != s^-1 contributes {v, s(v)} for every v; a
/// self-inverse s contributes {v, s(v)} once per 2-cycle. Fixed points
/// become loops. Throws std::invalid_argument for an intransitive action.
MultiGraph schreier_graph(const PermutationAction& a);

// Action text format: header `m g`, then g lines
// `label inverse_label p(0) ... p(m-1)`; `#` starts a comment.
PermutationAction read_action(std::istream& in);
void write_action(std::ostream& out, const PermutationAction& a);
PermutationAction load_action(const std::filesystem::path& path);
void save_action(const std::filesystem::path& path, const PermutationAction& a);

// ---------------------------------------------------------------------------
// Concrete groups.

enum class GroupKind { cyclic, boolean_cube, symmetric, sl_mod };

struct GroupSpec {
  GroupKind kind = GroupKind::cyclic;
  int n = 1;
  int k = 0;  ///< modulus for sl_mod
  std::string to_string() const;
};

/// Parses `cyclic:6`, `boolean_cube:3`, `symmetric:4`, `sl_mod:2:3`.
GroupSpec parse_group(std::string_view text);

/// Group elements in breadth-first order from the identity (index 0) along
/// left multiplication by the standard generators.
struct GroupEnumeration {
  std::vector<std::vector<int>> elements;
  std::vector<std::string> generator_labels;
  std::vector<std::string> inverse_labels;
};

inline constexpr std::size_t kDefaultElementCap = 200000;

GroupEnumeration enumerate_group(const GroupSpec& spec, std::size_t cap = kDefaultElementCap);

/// Schreier action of the standard generators on the left cosets xH, where H
/// is generated by the listed element indices (GroupEnumeration order; empty
/// means the trivial subgroup). Coset 0 is H; the rest follow the
/// breadth-first element order. Throws std::runtime_error when the group has
/// more than `cap` elements.
PermutationAction action_from_group(const GroupSpec& spec, std::span<const int> subgroup = {},
                                    std::size_t cap = kDefaultElementCap);

// ---------------------------------------------------------------------------
// Displacement constants.

/// ||pi(s) xi - xi||_p / ||xi||_p for the generator with index `g`, with the
/// entrywise l_p norm on m x d arrays.
double displacement(const PermutationAction& a, int g, const Eigen::MatrixXd& xi, double p);

struct KappaOptions {
  int restarts = 16;
  int max_iter = 3000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct KappaDiagnostics {
  int restarts = 0;
  int best_restart = -1;
  long long total_iterations = 0;
  std::vector<double> per_generator;  ///< displacement of every generator at the minimizer
};

struct KappaEstimate {
  double value = 0.0;
  /// Zero-sum, unit l_p norm, m x d.
  Eigen::MatrixXd minimizer;
  BoundKind bound_kind = BoundKind::upper;
  /// (2 lambda_1 / |S|)^{1/p} for the Schreier graph.
  double lower_from_gap = 0.0;
  /// True when the gap behind lower_from_gap is exact (p = 2).
  bool lower_certified = false;
  double gap = 0.0;
  double p = 2.0;
  int d = 1;
  KappaDiagnostics diagnostics;
};

/// Number of columns at which the truncation R^d of l_p(N, R) already
/// attains the stabilized kappa: one more than the number of generators up
/// to inversion. Ratios of a stacked xi are convex combinations of the
/// columns' ratio vectors, and Caratheodory bounds the columns needed.
int stabilized_dimension(const PermutationAction& a);

/// Minimizes max_s ||pi(s) xi - xi||_p over zero-sum xi : Gamma/H -> l_p^d,
/// using log-sum-exp smoothing of the max with increasing sharpness.
/// d = 0 selects stabilized_dimension(a).
KappaEstimate kappa_estimate(const PermutationAction& a, double p, int d,
                             const KappaOptions& opts = {},
                             const DescentOptions& gap_opts = {});

/// A relabeling of generators; must map S onto S and respect inverses.
using LabelMap = std::map<std::string, std::string>;

struct NuResult {
  double nu = 1.0;
  std::vector<std::vector<std::string>> orbits;
};

/// Orbits of <Q> on the labels of S and nu = max |S| / |orbit|.
/// Throws std::invalid_argument when some element of Q is not a bijection of
/// S or does not commute with inversion.
NuResult pak_zuk_nu(const PermutationAction& a, std::span<const LabelMap> Q);

/// The automorphisms used for the standard groups: inversion for cyclic,
/// coordinate permutations for boolean_cube, reversal for symmetric,
/// conjugation by permutation matrices for sl_mod.
std::vector<LabelMap> standard_automorphisms(const GroupSpec& spec);

struct SandwichReport {
  double kappa = 0.0;
  double lambda = 0.0;
  double p = 2.0;
  int generators = 0;
  std::optional<double> nu;
  double tolerance = 1e-2;
  /// lambda - kappa^p
  double lower_slack = 0.0;
  /// (|S|/2) kappa^p - lambda
  double upper_slack = 0.0;
  /// lambda - (|S|/(2 nu)) kappa^p, when nu is given
  std::optional<double> pak_zuk_slack;
  bool lower_ok = true;
  bool upper_ok = true;
  bool pak_zuk_ok = true;
  BoundKind lambda_kind = BoundKind::exact;

  bool passed() const { return lower_ok && upper_ok && pak_zuk_ok; }
};

/// Checks kappa^p <= lambda <= (|S|/2) kappa^p and, with nu,
/// (|S|/(2 nu)) kappa^p <= lambda. Each side may be violated by a relative
/// `tolerance` before it is flagged.
SandwichReport check_sandwich(double kappa, double lambda, int generators, double p,
                              std::optional<double> nu, double tolerance = 1e-2);

/// Computes kappa and lambda_1 of the Schreier graph for the same (p, d) and
/// runs check_sandwich.
SandwichReport verify_sandwich(const PermutationAction& a, double p, int d,
                               std::optional<double> nu = std::nullopt,
                               const KappaOptions& kopts = {}, const DescentOptions& gopts = {},
                               double tolerance = 1e-2);

}  // namespace bgap
