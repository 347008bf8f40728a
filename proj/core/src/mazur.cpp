#include "bgap/mazur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bgap/parallel.hpp"
#include "seeding.hpp"

namespace bgap {

namespace {

void check_exponent(double r, const char* what) {
  if (!std::isfinite(r) || r < 1.0) {
    throw std::invalid_argument(std::string(what) + ": exponent must be finite and >= 1");
  }
}

void require_unit(double norm, const char* what) {
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": input is not a unit vector (norm " +
                                std::to_string(norm) + ")");
  }
}

Eigen::VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
  return x;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// A pair of unit vectors for the norm `norm`, drawn per `sampler`.
template <typename Norm>
std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_pair(std::mt19937_64& rng, Eigen::Index n,
                                                      Sampler sampler, const Norm& norm) {
  auto unit = [&](Eigen::VectorXd v) {
    double s = norm(v);
    while (!(s > 0.0)) {
      v = gaussian(rng, n);
      s = norm(v);
    }
    return Eigen::VectorXd(v / s);
  };
  Eigen::VectorXd x = unit(gaussian(rng, n));
  Eigen::VectorXd y;
  switch (sampler) {
    case Sampler::uniform_sphere:
      y = unit(gaussian(rng, n));
      break;
    case Sampler::antipodal_pairs:
      y = unit(-x + log_uniform(rng, 1e-3, 1.0) * gaussian(rng, n));
      break;
    case Sampler::near_pairs:
      y = unit(x + log_uniform(rng, 1e-6, 1.0) * gaussian(rng, n));
      break;
  }
  return {std::move(x), std::move(y)};
}

constexpr long long kChunk = 4096;

// a^e for a >= 0, avoiding std::pow for the exponents the moduli use most.
double power(double a, double e) {
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  if (e == 0.5) return std::sqrt(a);
  if (e == 1.5) return a * std::sqrt(a);
  if (e == 3.0) return a * a * a;
  if (e == 4.0) return (a * a) * (a * a);
  return std::pow(a, e);
}

std::string exponent_text(double r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

bool exceeds(double delta, double limit) {
  return delta > limit * (1.0 + kModulusSlack) + 1e-15;
}

}  // namespace

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& x, double r) {
  if (r == 2.0) return x.norm();
  if (r == 1.0) return x.lpNorm<1>();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += power(std::abs(x(i)), r);
  return power(s, 1.0 / r);
}

Eigen::VectorXd mazur_map(const Eigen::VectorXd& x, double p, double q) {
  check_exponent(p, "mazur_map");
  check_exponent(q, "mazur_map");
  require_unit(lp_norm(x, p), "mazur_map");
  if (p == q) return x;
  const double e = p / q;
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    y(i) = a == 0.0 ? 0.0 : std::copysign(power(a, e), x(i));
  }
  return y;
}

SphereMap mazur(double p, double q, int dim) {
  check_exponent(p, "mazur");
  check_exponent(q, "mazur");
  if (dim < 1) throw std::invalid_argument("mazur: dim must be >= 1");
  SphereMap m;
  m.name = "M_{" + exponent_text(p) + "," + exponent_text(q) + "}";
  m.source_exponent = p;
  m.target_exponent = q;
  m.dim = dim;
  m.apply = [p, q](const Eigen::VectorXd& x) { return mazur_map(x, p, q); };
  return m;
}

SphereMap identity_map(double r, int dim) {
  check_exponent(r, "identity_map");
  if (dim < 1) throw std::invalid_argument("identity_map: dim must be >= 1");
  SphereMap m;
  m.name = "identity";
  m.source_exponent = r;
  m.target_exponent = r;
  m.dim = dim;
  m.apply = [](const Eigen::VectorXd& x) { return x; };
  return m;
}

Eigen::VectorXd canonical_extension(const SphereMap& phi, const Eigen::VectorXd& x) {
  const double norm = lp_norm(x, phi.source_exponent);
  if (norm == 0.0) return Eigen::VectorXd::Zero(x.size());
  return norm * phi.apply(x / norm);
}

double block_norm(const Eigen::VectorXd& x, int blocks, int dim, double r, double p) {
  if (blocks < 1 || x.size() != static_cast<Eigen::Index>(blocks) * dim) {
    throw std::invalid_argument("block_norm: vector length does not match blocks * dim");
  }
  double s = 0.0;
  for (int b = 0; b < blocks; ++b) s += power(lp_norm(x.segment(b * dim, dim), r), p);
  return power(s, 1.0 / p);
}

Eigen::VectorXd stabilized_map(const SphereMap& phi, int blocks, double p, const Eigen::VectorXd& xi) {
  check_exponent(p, "stabilized_map");
  require_unit(block_norm(xi, blocks, phi.dim, phi.source_exponent, p), "stabilized_map");
  Eigen::VectorXd out(xi.size());
  for (int b = 0; b < blocks; ++b) {
    out.segment(b * phi.dim, phi.dim) = canonical_extension(phi, xi.segment(b * phi.dim, phi.dim));
  }
  return out;
}

std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::uniform_sphere: return "uniform_sphere";
    case Sampler::antipodal_pairs: return "antipodal_pairs";
    case Sampler::near_pairs: return "near_pairs";
  }
  return "unknown";
}

std::optional<Sampler> parse_sampler(std::string_view name) {
  for (Sampler s : {Sampler::uniform_sphere, Sampler::antipodal_pairs, Sampler::near_pairs}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

double PowerModulus::operator()(double t) const { return C * std::pow(t, alpha); }

void fit_envelope(ModulusEstimate& est) {
  constexpr int kBins = 64;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : est.samples) {
    if (s.eps > 0.0 && s.delta > 0.0) {
      lo = std::min(lo, s.eps);
      hi = std::max(hi, s.eps);
    }
  }
  est.fitted_alpha = 1.0;
  est.fitted_C = 0.0;
  if (!(hi > 0.0)) return;

  std::vector<int> best(kBins, -1);
  const double span = std::log(hi) - std::log(lo);
  for (std::size_t i = 0; i < est.samples.size(); ++i) {
    const auto& s = est.samples[i];
    if (!(s.eps > 0.0 && s.delta > 0.0)) continue;
    int bin = span > 0.0 ? static_cast<int>((std::log(s.eps) - std::log(lo)) / span * kBins) : 0;
    bin = std::clamp(bin, 0, kBins - 1);
    if (best[bin] < 0 || s.delta > est.samples[best[bin]].delta) best[bin] = static_cast<int>(i);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int b : best) {
    if (b < 0) continue;
    xs.push_back(std::log(est.samples[b].eps));
    ys.push_back(std::log(est.samples[b].delta));
  }
  if (xs.size() < 2) {
    const auto& s = est.samples[best[0] >= 0 ? best[0] : 0];
    est.fitted_C = s.eps > 0.0 ? s.delta / s.eps : 0.0;
    return;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  double alpha = sxx > 0.0 ? sxy / sxx : 1.0;
  alpha = std::clamp(alpha, 1e-6, 1.0);
  est.fitted_alpha = alpha;
  est.fitted_C = std::exp(my - alpha * mx);
}

ModulusEstimate estimate_modulus(const SphereMap& phi, Sampler sampler, long long n_samples,
                                 std::uint64_t seed, std::optional<PowerModulus> bound) {
  if (n_samples < 1) throw std::invalid_argument("estimate_modulus: need n_samples >= 1");
  ModulusEstimate est;
  est.n_samples = n_samples;
  est.samples.resize(static_cast<std::size_t>(n_samples));
  const double r = phi.source_exponent;
  const double s = phi.target_exponent;
  const auto source_norm = [r](const Eigen::VectorXd& v) { return lp_norm(v, r); };

  const long long chunks = (n_samples + kChunk - 1) / kChunk;
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    std::mt19937_64 rng(detail::stream_seed(seed, c));
    const long long begin = static_cast<long long>(c) * kChunk;
    const long long end = std::min(n_samples, begin + kChunk);
    for (long long i = begin; i < end; ++i) {
      const auto [x, y] = draw_pair(rng, phi.dim, sampler, source_norm);
      ModulusSample& out = est.samples[static_cast<std::size_t>(i)];
      out.eps = lp_norm(x - y, r);
      out.delta = lp_norm(phi.apply(x) - phi.apply(y), s);
    }
  });

  if (bound) {
    for (const auto& smp : est.samples) {
      const double limit = (*bound)(smp.eps);
      if (exceeds(smp.delta, limit)) ++est.violations;
      if (limit > 0.0) est.max_ratio = std::max(est.max_ratio, smp.delta / limit);
    }
  }
  fit_envelope(est);
  return est;
}

StabilizedCheck check_stabilized_modulus(const SphereMap& phi, const PowerModulus& base, int blocks,
                                         double p, Sampler sampler, long long n_samples,
                                         std::uint64_t seed) {
  check_exponent(p, "check_stabilized_modulus");
  if (blocks < 1) throw std::invalid_argument("check_stabilized_modulus: need blocks >= 1");
  if (n_samples < 1) throw std::invalid_argument("check_stabilized_modulus: need n_samples >= 1");
  StabilizedCheck out;
  out.n_samples = n_samples;
  out.bound = PowerModulus{2.0 * base.C + 2.0, base.alpha};
  const int dim = phi.dim;
  const double r = phi.source_exponent;
  const double s = phi.target_exponent;
  const auto source_norm = [&](const Eigen::VectorXd& v) { return block_norm(v, blocks, dim, r, p); };

  const long long chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<long long> violations(static_cast<std::size_t>(chunks), 0);
  std::vector<double> ratios(static_cast<std::size_t>(chunks), 0.0);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    std::mt19937_64 rng(detail::stream_seed(seed, c));
    const long long begin = static_cast<long long>(c) * kChunk;
    const long long end = std::min(n_samples, begin + kChunk);
    for (long long i = begin; i < end; ++i) {
      const auto [x, y] = draw_pair(rng, static_cast<Eigen::Index>(blocks) * dim, sampler, source_norm);
      const double eps = block_norm(x - y, blocks, dim, r, p);
      const Eigen::VectorXd fx = stabilized_map(phi, blocks, p, x);
      const Eigen::VectorXd fy = stabilized_map(phi, blocks, p, y);
      const double delta = block_norm(fx - fy, blocks, dim, s, p);
      const double limit = out.bound(eps);
      if (exceeds(delta, limit)) ++violations[c];
      if (limit > 0.0) ratios[c] = std::max(ratios[c], delta / limit);
    }
  });
  for (std::size_t c = 0; c < violations.size(); ++c) {
    out.violations += violations[c];
    out.max_ratio = std::max(out.max_ratio, ratios[c]);
  }
  return out;
}

}  // namespace bgap
