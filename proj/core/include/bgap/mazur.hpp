#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bgap {

/// ||x||_r for r in [1, inf).
double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& x, double r);

/// A map between unit spheres S(l_source^dim) -> S(l_target^dim).
struct SphereMap {
  std::string name;
  double source_exponent = 2.0;
  double target_exponent = 2.0;
  int dim = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
};

/// Coordinatewise x_i -> sign(x_i) |x_i|^{p/q}. Throws std::invalid_argument
/// unless ||x||_p = 1 to within 1e-9.
Eigen::VectorXd mazur_map(const Eigen::VectorXd& x, double p, double q);

SphereMap mazur(double p, double q, int dim);
SphereMap identity_map(double r, int dim);

/// ||x|| phi(x / ||x||), and 0 at the origin. The norm is the source norm.
Eigen::VectorXd canonical_extension(const SphereMap& phi, const Eigen::VectorXd& x);

/// Norm of a vector of `blocks` consecutive blocks of length `dim`:
/// (sum_i ||x_i||_r^p)^{1/p}.
double block_norm(const Eigen::VectorXd& x, int blocks, int dim, double r, double p);

/// Applies the canonical extension of phi to every block. Input must have
/// unit block norm (inner exponent phi.source_exponent, outer exponent p).
Eigen::VectorXd stabilized_map(const SphereMap& phi, int blocks, double p, const Eigen::VectorXd& xi);

enum class Sampler { uniform_sphere, antipodal_pairs, near_pairs };
std::string_view to_string(Sampler s);
std::optional<Sampler> parse_sampler(std::string_view name);

/// delta(t) = C t^alpha.
struct PowerModulus {
  double C = 1.0;
  double alpha = 1.0;
  double operator()(double t) const;
};

/// Relative slack applied before a sample counts as exceeding a modulus.
inline constexpr double kModulusSlack = 1e-9;

struct ModulusSample {
  double eps = 0.0;
  double delta = 0.0;
};

struct ModulusEstimate {
  std::vector<ModulusSample> samples;
  double fitted_C = 0.0;
  double fitted_alpha = 1.0;
  long long violations = 0;
  long long n_samples = 0;
  double max_ratio = 0.0;  ///< max delta / bound(eps) over samples with a bound
};

/// Upper-envelope fit of delta ~ C eps^alpha over 64 log-spaced bins.
/// alpha is clamped to (0, 1].
void fit_envelope(ModulusEstimate& est);

/// Samples pairs on the source sphere and records (||x-y||, ||phi x - phi y||).
/// Violations are counted against `bound` when supplied.
ModulusEstimate estimate_modulus(const SphereMap& phi, Sampler sampler, long long n_samples,
                                 std::uint64_t seed, std::optional<PowerModulus> bound = {});

struct StabilizedCheck {
  long long violations = 0;
  long long n_samples = 0;
  double max_ratio = 0.0;
  PowerModulus bound;  ///< (2C + 2) t^alpha
};

/// Counts sampled block pairs with ||Phi x - Phi y|| > (2C+2)||x-y||^alpha,
/// where (C, alpha) is a modulus of phi and norms are block norms.
StabilizedCheck check_stabilized_modulus(const SphereMap& phi, const PowerModulus& base, int blocks,
                                         double p, Sampler sampler, long long n_samples,
                                         std::uint64_t seed);

}  // namespace bgap
