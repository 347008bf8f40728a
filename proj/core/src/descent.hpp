#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace bgap::detail {

/// Objective on n x d matrices that is invariant under positive scaling and
/// under adding a constant row. Returns the value; fills `grad` when non-null.
using Objective = std::function<double(const Eigen::MatrixXd& x, Eigen::MatrixXd* grad)>;

struct DescentSettings {
  int max_iter = 5000;
  double tol = 1e-10;
};

struct DescentOutcome {
  Eigen::MatrixXd point;
  double value = 0.0;
  int iterations = 0;
  double last_step = 0.0;
  bool converged = false;
};

/// Subtracts column means.
void project_mean_zero(Eigen::MatrixXd& x);

/// Scales to unit Frobenius norm; returns false for the zero matrix.
bool normalize_frobenius(Eigen::MatrixXd& x);

/// Projected (sub)gradient descent on {x : column sums 0, |x|_F = 1}.
/// Trial steps come from the Barzilai-Borwein rule; each step is accepted by
/// Armijo backtracking. Stops when the accepted step is shorter than `tol`,
/// when no decrease can be found, or after `max_iter` iterations.
DescentOutcome sphere_descent(const Objective& objective, Eigen::MatrixXd start,
                              const DescentSettings& settings);

/// x^e for x >= 0 with fast paths for the exponents used in experiments.
inline double power(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.0) return 1.0;
  if (e == 3.0) return x * x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.5) return x * std::sqrt(x);
  if (e == -1.0) return 1.0 / x;
  if (e == -0.5) return 1.0 / std::sqrt(x);
  if (e == 4.0) {
    const double s = x * x;
    return s * s;
  }
  return std::pow(x, e);
}

/// phi(x) = ||x||_q^p on R^d with every |x_i| replaced by sqrt(x_i^2 + mu^2).
/// With mu = 0 this is the exact norm power and the subgradient picks 0 at
/// kinks.
class NormPower {
 public:
  NormPower(double p, double q, double mu) : p_(p), q_(q), mu_(mu) {}

  double p() const { return p_; }

  template <typename Row>
  double value(const Row& x) const {
    if (x.size() == 1) return power(smoothed_abs(x(0)), p_);
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += power(smoothed_abs(x(i)), q_);
    return power(s, p_ / q_);
  }

  /// Adds scale * grad phi(x) into `out`.
  template <typename Row, typename Out>
  void add_gradient(const Row& x, double scale, Out&& out) const {
    if (x.size() == 1) {
      const double a = smoothed_abs(x(0));
      if (a == 0.0) return;
      out(0) += scale * p_ * power(a, p_ - 2.0) * x(0);
      return;
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += power(smoothed_abs(x(i)), q_);
    if (s == 0.0) return;
    const double outer = scale * p_ * power(s, p_ / q_ - 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = smoothed_abs(x(i));
      if (a == 0.0) continue;
      out(i) += outer * power(a, q_ - 2.0) * x(i);
    }
  }

 private:
  double smoothed_abs(double t) const {
    return mu_ == 0.0 ? std::abs(t) : std::sqrt(t * t + mu_ * mu_);
  }

  double p_;
  double q_;
  double mu_;
};

}  // namespace bgap::detail
