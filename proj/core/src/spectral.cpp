#include "bgap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "bgap/parallel.hpp"
#include "descent.hpp"
#include "seeding.hpp"

namespace bgap {

std::string_view to_string(GapMethod method) {
  switch (method) {
    case GapMethod::eigen_exact: return "eigen_exact";
    case GapMethod::multistart_descent: return "multistart_descent";
    case GapMethod::grid_oracle: return "grid_oracle";
  }
  return "unknown";
}

std::string_view to_string(BoundKind kind) {
  return kind == BoundKind::exact ? "exact" : "upper";
}

namespace {

void check_exponent(double value, const char* name) {
  if (!std::isfinite(value) || value < 1.0) {
    throw std::invalid_argument(std::string("invalid exponent ") + name + " = " +
                                std::to_string(value) + " (need a finite value >= 1)");
  }
}

double norm_power(const Eigen::Ref<const Eigen::RowVectorXd>& x, double q, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), q);
  return std::pow(s, p / q);
}

struct WeightedEdge {
  int u;
  int v;
  double weight;
};

std::vector<WeightedEdge> plain_edges(const MultiGraph& g) {
  std::vector<WeightedEdge> out;
  for (const Edge& e : g.edges()) {
    if (e.u != e.v) out.push_back({e.u, e.v, static_cast<double>(e.multiplicity)});
  }
  return out;
}

Eigen::MatrixXd plain_laplacian(const MultiGraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    const double m = e.multiplicity;
    lap(e.u, e.v) -= m;
    lap(e.v, e.u) -= m;
    lap(e.u, e.u) += m;
    lap(e.v, e.v) += m;
  }
  return lap;
}

// Quotient objective for the descent core, with optional smoothing.
detail::Objective quotient_objective(const std::vector<WeightedEdge>& edges, int n, int d,
                                     detail::NormPower phi) {
  if (d == 1) {
    return [&edges, n, phi](const Eigen::MatrixXd& x, Eigen::MatrixXd* grad) {
      const double* f = x.data();
      double mean = 0.0;
      for (int v = 0; v < n; ++v) mean += f[v];
      mean /= n;
      Eigen::Matrix<double, 1, 1> cell;
      double num = 0.0;
      double den = 0.0;
      for (const auto& e : edges) {
        cell(0) = f[e.v] - f[e.u];
        num += e.weight * phi.value(cell);
      }
      for (int v = 0; v < n; ++v) {
        cell(0) = f[v] - mean;
        den += phi.value(cell);
      }
      if (!(den > 0.0)) {
        if (grad) grad->setZero();
        return std::numeric_limits<double>::infinity();
      }
      const double ratio = num / den;
      if (grad) {
        double* gr = grad->data();
        std::fill(gr, gr + n, 0.0);
        Eigen::Matrix<double, 1, 1> acc;
        for (const auto& e : edges) {
          cell(0) = f[e.v] - f[e.u];
          acc(0) = 0.0;
          phi.add_gradient(cell, e.weight / den, acc);
          gr[e.v] += acc(0);
          gr[e.u] -= acc(0);
        }
        for (int v = 0; v < n; ++v) {
          cell(0) = f[v] - mean;
          acc(0) = 0.0;
          phi.add_gradient(cell, -ratio / den, acc);
          gr[v] += acc(0);
        }
      }
      return ratio;
    };
  }
  return [&edges, n, d, phi](const Eigen::MatrixXd& x, Eigen::MatrixXd* grad) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::RowVectorXd diff(d);
    double num = 0.0;
    double den = 0.0;
    for (const auto& e : edges) {
      diff.noalias() = x.row(e.v) - x.row(e.u);
      num += e.weight * phi.value(diff);
    }
    for (int v = 0; v < n; ++v) {
      diff.noalias() = x.row(v) - mean;
      den += phi.value(diff);
    }
    if (!(den > 0.0)) {
      if (grad) grad->setZero();
      return std::numeric_limits<double>::infinity();
    }
    const double ratio = num / den;
    if (grad) {
      grad->setZero();
      Eigen::RowVectorXd acc(d);
      for (const auto& e : edges) {
        diff.noalias() = x.row(e.v) - x.row(e.u);
        acc.setZero();
        phi.add_gradient(diff, e.weight / den, acc);
        grad->row(e.v) += acc;
        grad->row(e.u) -= acc;
      }
      for (int v = 0; v < n; ++v) {
        diff.noalias() = x.row(v) - mean;
        acc.setZero();
        phi.add_gradient(diff, -ratio / den, acc);
        grad->row(v) += acc;
      }
    }
    return ratio;
  };
}

struct RestartResult {
  Eigen::MatrixXd point;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  long long total_iterations = 0;
  double last_step = 0.0;
  bool converged = false;
};

}  // namespace

double rayleigh_quotient(const MultiGraph& g, const VectorMap& f) {
  const int n = g.num_vertices();
  if (f.rows() != n || f.dim() < 1) {
    throw std::invalid_argument("rayleigh_quotient: map shape does not match the graph");
  }
  check_exponent(f.p, "p");
  check_exponent(f.q, "q");
  const Eigen::RowVectorXd mean = f.values.colwise().mean();
  double den = 0.0;
  for (int v = 0; v < n; ++v) den += norm_power(f.values.row(v) - mean, f.q, f.p);
  if (!(den > 0.0)) throw std::invalid_argument("rayleigh_quotient: map is constant");
  double num = 0.0;
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    // Each undirected copy appears twice among oriented edges; the 1/2 cancels.
    num += e.multiplicity * norm_power(f.values.row(e.v) - f.values.row(e.u), f.q, f.p);
  }
  return num / den;
}

GapEstimate gap_exact_2(const MultiGraph& g) {
  require_connected(g, "gap_exact_2");
  if (g.num_vertices() < 2) {
    throw std::invalid_argument("gap_exact_2: need at least two vertices");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(plain_laplacian(g));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gap_exact_2: eigensolver failed");
  }
  GapEstimate out;
  out.value = solver.eigenvalues()(1);
  out.minimizer.values = solver.eigenvectors().col(1);
  out.minimizer.p = 2.0;
  out.minimizer.q = 2.0;
  out.method = GapMethod::eigen_exact;
  out.bound_kind = BoundKind::exact;
  out.p = 2.0;
  out.q = 2.0;
  out.d = 1;
  out.diagnostics.restarts = 0;
  out.diagnostics.iterations = 0;
  return out;
}

GapEstimate gap_estimate(const MultiGraph& g, double p, double q, int d,
                         const DescentOptions& opts) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (d < 1) throw std::invalid_argument("gap_estimate: need d >= 1");
  if (opts.restarts < 1 || opts.max_iter < 1) {
    throw std::invalid_argument("gap_estimate: need restarts >= 1 and max_iter >= 1");
  }
  require_connected(g, "gap_estimate");
  const int n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("gap_estimate: need at least two vertices");

  const auto edges = plain_edges(g);
  const GapEstimate eigen = gap_exact_2(g);

  // Warm starts: the p = 2 eigenvector, and for d > 1 the best d = 1 map
  // (l_q^1 sits isometrically in l_q^d) plus the leading eigenvectors spread
  // over the columns.
  std::vector<Eigen::MatrixXd> warm;
  {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, d);
    w.col(0) = eigen.minimizer.values.col(0);
    warm.push_back(std::move(w));
  }
  if (d > 1) {
    const GapEstimate line = gap_estimate(g, p, q, 1, opts);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, d);
    w.col(0) = line.minimizer.values.col(0);
    warm.push_back(std::move(w));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(plain_laplacian(g));
    Eigen::MatrixXd spread = Eigen::MatrixXd::Zero(n, d);
    for (int j = 0; j < d; ++j) {
      spread.col(j) = solver.eigenvectors().col(1 + (j % (n - 1)));
    }
    warm.push_back(std::move(spread));
  }

  // Kinks (p < 2 at coincident values, q < 2 at zero coordinates) are handled
  // by a smoothing continuation that ends with the exact objective.
  std::vector<double> mus;
  if (p < 2.0 || (q < 2.0 && d > 1)) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) * d);
    for (double m = 1e-1; m > 5e-7; m *= 0.1) mus.push_back(m * scale);
  }
  mus.push_back(0.0);

  const int restarts = std::max<int>(opts.restarts, static_cast<int>(warm.size()));
  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Eigen::MatrixXd start;
    if (r < warm.size()) {
      start = warm[r];
    } else {
      std::mt19937_64 rng(detail::stream_seed(opts.seed, r));
      std::normal_distribution<double> normal;
      start.resize(n, d);
      for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] = normal(rng);
    }
    RestartResult& res = results[r];
    for (std::size_t stage = 0; stage < mus.size(); ++stage) {
      const bool final_stage = stage + 1 == mus.size();
      detail::DescentSettings settings;
      settings.max_iter = final_stage ? opts.max_iter : std::max(200, opts.max_iter / 5);
      settings.tol = final_stage ? opts.tol : std::max(opts.tol, 1e-9);
      const auto objective = quotient_objective(edges, n, d, detail::NormPower(p, q, mus[stage]));
      auto outcome = detail::sphere_descent(objective, std::move(start), settings);
      res.total_iterations += outcome.iterations;
      start = std::move(outcome.point);
      if (final_stage) {
        res.iterations = outcome.iterations;
        res.last_step = outcome.last_step;
        res.converged = outcome.converged;
      }
    }
    res.point = std::move(start);
    VectorMap candidate{res.point, q, p};
    try {
      res.value = rayleigh_quotient(g, candidate);
    } catch (const std::invalid_argument&) {
      res.value = std::numeric_limits<double>::infinity();
    }
  });

  std::size_t best = 0;
  long long total = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    total += results[r].total_iterations;
    if (results[r].value < results[best].value) best = r;
  }
  if (!std::isfinite(results[best].value)) {
    throw std::runtime_error("gap_estimate: every restart degenerated to a constant map");
  }

  GapEstimate out;
  out.minimizer = VectorMap{results[best].point, q, p};
  out.value = rayleigh_quotient(g, out.minimizer);
  out.method = GapMethod::multistart_descent;
  out.bound_kind = BoundKind::upper;
  out.p = p;
  out.q = q;
  out.d = d;
  out.diagnostics.restarts = restarts;
  out.diagnostics.best_restart = static_cast<int>(best);
  out.diagnostics.iterations = results[best].iterations;
  out.diagnostics.total_iterations = total;
  out.diagnostics.final_step_norm = results[best].last_step;
  out.diagnostics.converged = results[best].converged;
  return out;
}

GapEstimate best_gap(const MultiGraph& g, double p, double q, int d,
                     const DescentOptions& opts) {
  if (p == 2.0 && (q == 2.0 || d == 1)) {
    GapEstimate out = gap_exact_2(g);
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(g.num_vertices(), d);
    padded.col(0) = out.minimizer.values.col(0);
    out.minimizer = VectorMap{std::move(padded), q, 2.0};
    out.q = q;
    out.d = d;
    return out;
  }
  return gap_estimate(g, p, q, d, opts);
}

ExtrapolationReport extrapolation_report(std::span<const MultiGraph> family,
                                         std::span<const double> exponents,
                                         const DescentOptions& opts) {
  for (double p : exponents) check_exponent(p, "p");
  ExtrapolationReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const MultiGraph& g = family[i];
    const double gap2 = gap_exact_2(g).value;
    for (double p : exponents) {
      ExtrapolationRow row;
      row.graph_index = i;
      row.vertices = g.num_vertices();
      row.p = p;
      row.gap_2 = gap2;
      if (p == 2.0) {
        row.gap_p = gap2;
        row.bound_kind = BoundKind::exact;
      } else {
        row.gap_p = gap_estimate(g, p, 2.0, 1, opts).value;
        row.bound_kind = BoundKind::upper;
      }
      row.ratio = p >= 2.0 ? row.gap_p / std::pow(gap2, p / 2.0) : row.gap_p / gap2;
      report.rows.push_back(row);
    }
  }
  for (double p : exponents) {
    ExtrapolationSummary s;
    s.p = p;
    s.min_ratio = std::numeric_limits<double>::infinity();
    s.max_ratio = -std::numeric_limits<double>::infinity();
    for (const auto& row : report.rows) {
      if (row.p != p) continue;
      s.min_ratio = std::min(s.min_ratio, row.ratio);
      s.max_ratio = std::max(s.max_ratio, row.ratio);
    }
    report.per_exponent.push_back(s);
  }
  return report;
}

}  // namespace bgap
