#include "descent.hpp"

#include <algorithm>
#include <limits>

namespace bgap::detail {

void project_mean_zero(Eigen::MatrixXd& x) {
  if (x.rows() == 0) return;
  x.rowwise() -= x.colwise().mean();
}

bool normalize_frobenius(Eigen::MatrixXd& x) {
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  x /= norm;
  return true;
}

namespace {

// Keeps the direction tangent to the constraint set.
void tangent_project(Eigen::MatrixXd& g, const Eigen::MatrixXd& x) {
  project_mean_zero(g);
  g -= (g.cwiseProduct(x).sum()) * x;
}

}  // namespace

DescentOutcome sphere_descent(const Objective& objective, Eigen::MatrixXd start,
                              const DescentSettings& settings) {
  DescentOutcome out;
  project_mean_zero(start);
  if (!normalize_frobenius(start)) {
    out.point = std::move(start);
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }

  Eigen::MatrixXd x = std::move(start);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  double fx = objective(x, &g);
  tangent_project(g, x);

  constexpr double kArmijo = 1e-4;
  constexpr double kMaxStep = 1e6;
  double trial = 0.1 / std::max(g.norm(), 1e-12);

  Eigen::MatrixXd y(x.rows(), x.cols());
  Eigen::MatrixXd gy(x.rows(), x.cols());
  for (int it = 1; it <= settings.max_iter; ++it) {
    out.iterations = it;
    const double gnorm2 = g.squaredNorm();
    if (gnorm2 == 0.0) {
      out.converged = true;
      out.last_step = 0.0;
      break;
    }
    const double gnorm = std::sqrt(gnorm2);

    double t = trial;
    double fy = 0.0;
    bool accepted = false;
    for (int back = 0; back < 80; ++back) {
      y = x - t * g;
      project_mean_zero(y);
      if (normalize_frobenius(y)) {
        fy = objective(y, nullptr);
        if (fy <= fx - kArmijo * t * gnorm2) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
      if (t * gnorm < 1e-18) break;
    }
    if (!accepted) {
      out.converged = true;
      out.last_step = 0.0;
      break;
    }

    gy.setZero();
    fy = objective(y, &gy);
    tangent_project(gy, y);

    const double step = (y - x).norm();
    const double sy = (y - x).cwiseProduct(gy - g).sum();
    trial = sy > 0.0 ? (y - x).squaredNorm() / sy : 2.0 * t;
    trial = std::clamp(trial, 1e-16, kMaxStep);

    x.swap(y);
    g.swap(gy);
    fx = fy;
    out.last_step = step;
    if (step < settings.tol) {
      out.converged = true;
      break;
    }
  }
  out.point = std::move(x);
  out.value = fx;
  return out;
}

}  // namespace bgap::detail
