#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bgap/graph.hpp"

namespace bgap {

/// A map V -> R^d, row v holding f(v). `q` is the coordinate norm exponent
/// (X = l_q^d), `p` the outer exponent of the quotient.
struct VectorMap {
  Eigen::MatrixXd values;
  double q = 2.0;
  double p = 2.0;

  int rows() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

enum class GapMethod { eigen_exact, multistart_descent, grid_oracle };
enum class BoundKind { exact, upper };

std::string_view to_string(GapMethod method);
std::string_view to_string(BoundKind kind);

struct GapDiagnostics {
  int restarts = 0;
  int best_restart = -1;
  int iterations = 0;        ///< iterations of the winning restart
  long long total_iterations = 0;
  double final_step_norm = 0.0;
  bool converged = true;
  double error_bound = 0.0;  ///< grid oracle only: estimated distance to the infimum
  long long evaluations = 0; ///< grid oracle only
};

/// A spectral gap value together with the map realizing it.
///
/// For `upper` estimates the value is the quotient at `minimizer`, which is
/// >= the true infimum.
struct GapEstimate {
  double value = 0.0;
  VectorMap minimizer;
  GapMethod method = GapMethod::eigen_exact;
  BoundKind bound_kind = BoundKind::exact;
  double p = 2.0;
  double q = 2.0;
  int d = 1;
  GapDiagnostics diagnostics;
};

/// (1/2) sum over oriented edges of ||f(w)-f(v)||_q^p divided by
/// sum_v ||f(v)-m(f)||_q^p. Self-loops contribute nothing.
/// Throws std::invalid_argument if f is constant or has the wrong shape.
double rayleigh_quotient(const MultiGraph& g, const VectorMap& f);

/// Second-smallest eigenvalue of L = D' - A (loops dropped from both).
/// Exact for X = R, p = 2. Throws on disconnected input or n < 2.
GapEstimate gap_exact_2(const MultiGraph& g);

struct DescentOptions {
  int restarts = 32;
  int max_iter = 5000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

/// Multi-start minimization of the quotient over mean-zero unit maps into
/// l_q^d. The returned value is attained by the returned minimizer, hence an
/// upper bound on lambda_1(G; l_q^d, p). Deterministic for fixed options.
GapEstimate gap_estimate(const MultiGraph& g, double p, double q, int d,
                         const DescentOptions& opts = {});

/// Brute-force angular grid over the mean-zero unit sphere for |V| <= 4 and
/// X = R. `diagnostics.error_bound` estimates how far the grid minimum can sit
/// above the true infimum.
GapEstimate gap_oracle_small(const MultiGraph& g, double p, double resolution = 1e-4);

/// Exact p = 2 value when applicable (p == 2 and (q == 2 or d == 1)),
/// otherwise gap_estimate.
GapEstimate best_gap(const MultiGraph& g, double p, double q, int d,
                     const DescentOptions& opts = {});

struct ExtrapolationRow {
  std::size_t graph_index = 0;
  int vertices = 0;
  double p = 2.0;
  double gap_p = 0.0;
  double gap_2 = 0.0;
  /// gap_p / gap_2^{p/2} for p >= 2 and gap_p / gap_2 for p < 2.
  double ratio = 0.0;
  BoundKind bound_kind = BoundKind::exact;
};

struct ExtrapolationSummary {
  double p = 2.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

struct ExtrapolationReport {
  std::vector<ExtrapolationRow> rows;
  std::vector<ExtrapolationSummary> per_exponent;
};

/// Matousek-type ratios for a graph family. Uses X = R for all exponents.
ExtrapolationReport extrapolation_report(std::span<const MultiGraph> family,
                                         std::span<const double> exponents,
                                         const DescentOptions& opts = {});

}  // namespace bgap
