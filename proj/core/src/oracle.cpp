#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bgap/spectral.hpp"

// Brute-force grid minimization, deliberately written without the descent
// core or its fast power paths so that it can serve as an independent check.

namespace bgap {

namespace {

constexpr double kPi = std::numbers::pi;

// Orthonormal basis of the mean-zero hyperplane in R^n (Helmert).
std::vector<std::vector<double>> helmert(int n) {
  std::vector<std::vector<double>> basis;
  for (int k = 1; k < n; ++k) {
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) h[i] = s;
    h[k] = -k * s;
    basis.push_back(std::move(h));
  }
  return basis;
}

class GridQuotient {
 public:
  GridQuotient(const MultiGraph& g, double p) : p_(p), basis_(helmert(g.num_vertices())) {
    n_ = g.num_vertices();
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      ends_.push_back({e.u, e.v});
      mult_.push_back(e.multiplicity);
    }
  }

  // f = sum_k c_k h_k for coefficients c on the unit sphere.
  std::array<double, 4> point(const std::array<double, 3>& c) const {
    std::array<double, 4> f{};
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      for (int v = 0; v < n_; ++v) f[v] += c[k] * basis_[k][v];
    }
    return f;
  }

  double operator()(const std::array<double, 3>& c) const {
    const auto f = point(c);
    double num = 0.0;
    for (std::size_t i = 0; i < ends_.size(); ++i) {
      num += mult_[i] * std::pow(std::abs(f[ends_[i][1]] - f[ends_[i][0]]), p_);
    }
    double den = 0.0;
    for (int v = 0; v < n_; ++v) den += std::pow(std::abs(f[v]), p_);
    ++evaluations;
    return num / den;
  }

  int n() const { return n_; }
  mutable long long evaluations = 0;

 private:
  double p_;
  int n_ = 0;
  std::vector<std::vector<double>> basis_;
  std::vector<std::array<int, 2>> ends_;
  std::vector<double> mult_;
};

std::array<double, 3> circle(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

std::array<double, 3> sphere(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

struct GridResult {
  std::array<double, 3> coeffs{};
  double value = std::numeric_limits<double>::infinity();
  double slope = 0.0;
  double spacing = 0.0;
};

GridResult search_circle(const GridQuotient& q, double resolution) {
  const long steps = static_cast<long>(std::ceil(kPi / resolution));
  const double h = kPi / static_cast<double>(steps);
  GridResult out;
  out.spacing = h;
  double first = 0.0;
  double prev = 0.0;
  for (long i = 0; i < steps; ++i) {
    const auto c = circle(h * i);
    const double v = q(c);
    if (i == 0) first = v;
    if (i > 0) out.slope = std::max(out.slope, std::abs(v - prev) / h);
    if (v < out.value) {
      out.value = v;
      out.coeffs = c;
    }
    prev = v;
  }
  // theta = pi is the antipode of theta = 0, which closes the loop.
  out.slope = std::max(out.slope, std::abs(first - prev) / h);
  return out;
}

GridResult search_sphere(const GridQuotient& q, double resolution) {
  const double coarse_target = std::max(resolution, 2e-3);
  const long nt = static_cast<long>(std::ceil(kPi / coarse_target));
  const double h0 = kPi / static_cast<double>(nt);
  const long np = nt;  // phi in [0, pi)
  std::vector<double> values(static_cast<std::size_t>((nt + 1) * np));
  auto at = [&](long i, long j) -> double& { return values[static_cast<std::size_t>(i * np + j)]; };

  GridResult out;
  for (long i = 0; i <= nt; ++i) {
    for (long j = 0; j < np; ++j) {
      const double v = q(sphere(h0 * i, h0 * j));
      at(i, j) = v;
      if (i > 0) out.slope = std::max(out.slope, std::abs(v - at(i - 1, j)) / h0);
      if (j > 0) out.slope = std::max(out.slope, std::abs(v - at(i, j - 1)) / h0);
    }
  }

  struct Seed {
    double value;
    long i;
    long j;
  };
  std::vector<Seed> minima;
  for (long i = 0; i <= nt; ++i) {
    for (long j = 0; j < np; ++j) {
      const double v = at(i, j);
      bool local = true;
      for (long di = -1; di <= 1 && local; ++di) {
        for (long dj = -1; dj <= 1; ++dj) {
          const long a = i + di;
          const long b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || a > nt || b < 0 || b >= np) continue;
          if (at(a, b) < v) {
            local = false;
            break;
          }
        }
      }
      if (local) minima.push_back({v, i, j});
    }
  }
  std::sort(minima.begin(), minima.end(), [](const Seed& a, const Seed& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  constexpr std::size_t kWindows = 32;
  if (minima.size() > kWindows) minima.resize(kWindows);

  const long sub = std::max(1L, static_cast<long>(std::ceil(h0 / resolution)));
  const double hf = h0 / static_cast<double>(sub);
  out.spacing = hf;
  for (const Seed& s : minima) {
    const double t0 = h0 * s.i;
    const double p0 = h0 * s.j;
    std::vector<double> row_prev;
    std::vector<double> row(static_cast<std::size_t>(2 * sub + 1));
    for (long a = -sub; a <= sub; ++a) {
      const double theta = t0 + hf * a;
      const bool valid_row = theta >= 0.0 && theta <= kPi;
      for (long b = -sub; b <= sub; ++b) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (valid_row) {
          const auto c = sphere(theta, p0 + hf * b);
          v = q(c);
          if (v < out.value) {
            out.value = v;
            out.coeffs = c;
          }
        }
        const std::size_t k = static_cast<std::size_t>(b + sub);
        if (b > -sub && !std::isnan(v) && !std::isnan(row[k - 1])) {
          out.slope = std::max(out.slope, std::abs(v - row[k - 1]) / hf);
        }
        if (!row_prev.empty() && !std::isnan(v) && !std::isnan(row_prev[k])) {
          out.slope = std::max(out.slope, std::abs(v - row_prev[k]) / hf);
        }
        row[k] = v;
      }
      row_prev = row;
    }
  }
  return out;
}

}  // namespace

GapEstimate gap_oracle_small(const MultiGraph& g, double p, double resolution) {
  if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("gap_oracle_small: need p >= 1");
  if (!(resolution > 0.0) || resolution > 1.0) {
    throw std::invalid_argument("gap_oracle_small: resolution must lie in (0, 1]");
  }
  const int n = g.num_vertices();
  if (n < 2 || n > 4) {
    throw std::invalid_argument("gap_oracle_small: need 2 <= |V| <= 4, got " + std::to_string(n));
  }
  require_connected(g, "gap_oracle_small");

  const GridQuotient q(g, p);
  GridResult res;
  if (n == 2) {
    res.coeffs = {1.0, 0.0, 0.0};
    res.value = q(res.coeffs);
  } else if (n == 3) {
    res = search_circle(q, resolution);
  } else {
    res = search_sphere(q, resolution);
  }

  GapEstimate out;
  const auto f = q.point(res.coeffs);
  out.minimizer.values.resize(n, 1);
  for (int v = 0; v < n; ++v) out.minimizer.values(v, 0) = f[v];
  out.minimizer.p = p;
  out.minimizer.q = 2.0;
  out.value = res.value;
  out.method = GapMethod::grid_oracle;
  out.bound_kind = BoundKind::exact;
  out.p = p;
  out.q = 2.0;
  out.d = 1;
  out.diagnostics.error_bound = res.slope * res.spacing;
  out.diagnostics.evaluations = q.evaluations;
  return out;
}

}  // namespace bgap
