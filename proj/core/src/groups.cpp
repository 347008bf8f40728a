#include "bgap/groups.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bgap/parallel.hpp"
#include "descent.hpp"
#include "seeding.hpp"
#include "text_lines.hpp"

namespace bgap {

PermutationAction PermutationAction::build(int m, std::vector<Generator> generators) {
  if (m < 1) throw std::invalid_argument("permutation action: need m >= 1");
  PermutationAction a;
  a.m_ = m;
  std::map<std::string, int> by_label;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Generator& gen = generators[g];
    if (gen.label.empty() || gen.inverse_label.empty()) {
      throw std::invalid_argument("permutation action: empty generator label");
    }
    if (!by_label.emplace(gen.label, static_cast<int>(g)).second) {
      throw std::invalid_argument("permutation action: duplicate label " + gen.label);
    }
    if (gen.perm.size() != static_cast<std::size_t>(m)) {
      throw std::invalid_argument("permutation action: generator " + gen.label +
                                  " has the wrong length");
    }
    std::vector<char> hit(static_cast<std::size_t>(m), 0);
    for (int x : gen.perm) {
      if (x < 0 || x >= m || hit[static_cast<std::size_t>(x)]) {
        throw std::invalid_argument("permutation action: generator " + gen.label +
                                    " is not a permutation");
      }
      hit[static_cast<std::size_t>(x)] = 1;
    }
  }
  a.inverse_.resize(generators.size());
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Generator& gen = generators[g];
    const auto it = by_label.find(gen.inverse_label);
    if (it == by_label.end()) {
      throw std::invalid_argument("permutation action: inverse " + gen.inverse_label + " of " +
                                  gen.label + " is missing");
    }
    const Generator& inv = generators[static_cast<std::size_t>(it->second)];
    if (inv.inverse_label != gen.label) {
      throw std::invalid_argument("permutation action: inverse labels of " + gen.label +
                                  " are not paired");
    }
    for (int x = 0; x < m; ++x) {
      if (inv.perm[static_cast<std::size_t>(gen.perm[static_cast<std::size_t>(x)])] != x) {
        throw std::invalid_argument("permutation action: " + inv.label +
                                    " is not the inverse of " + gen.label);
      }
    }
    a.inverse_[g] = it->second;
  }
  a.gens_ = std::move(generators);
  return a;
}

std::optional<int> PermutationAction::index_of(const std::string& label) const {
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    if (gens_[g].label == label) return static_cast<int>(g);
  }
  return std::nullopt;
}

bool PermutationAction::transitive() const {
  std::vector<char> seen(static_cast<std::size_t>(m_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& gen : gens_) {
      const int y = gen.perm[static_cast<std::size_t>(x)];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == m_;
}

bool operator==(const PermutationAction& a, const PermutationAction& b) {
  if (a.m_ != b.m_ || a.gens_.size() != b.gens_.size()) return false;
  for (std::size_t g = 0; g < a.gens_.size(); ++g) {
    const auto& x = a.gens_[g];
    const auto& y = b.gens_[g];
    if (x.label != y.label || x.inverse_label != y.inverse_label || x.perm != y.perm) return false;
  }
  return true;
}

MultiGraph schreier_graph(const PermutationAction& a) {
  if (!a.transitive()) throw std::invalid_argument("schreier_graph: action is not transitive");
  std::vector<Edge> edges;
  const auto& gens = a.generators();
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const int inv = a.inverse_index(static_cast<int>(g));
    const auto& perm = gens[g].perm;
    if (inv == static_cast<int>(g)) {
      for (int v = 0; v < a.size(); ++v) {
        const int w = perm[static_cast<std::size_t>(v)];
        if (v <= w) edges.push_back({v, w, 1});
      }
    } else if (static_cast<int>(g) < inv) {
      // The partner s^-1 traverses the same edges backwards.
      for (int v = 0; v < a.size(); ++v) edges.push_back({v, perm[static_cast<std::size_t>(v)], 1});
    }
  }
  return MultiGraph::build(a.size(), edges);
}

PermutationAction read_action(std::istream& in) {
  detail::DataLines lines(in);
  std::istringstream header(lines.next("action header"));
  long long m = -1;
  long long count = -1;
  if (!(header >> m >> count) || m < 1 || count < 0) {
    throw std::runtime_error("action: header must be `m g` with m >= 1, g >= 0");
  }
  std::vector<Generator> gens;
  for (long long i = 0; i < count; ++i) {
    std::istringstream row(lines.next("generator line"));
    Generator gen;
    if (!(row >> gen.label >> gen.inverse_label)) {
      throw std::runtime_error("action: line " + std::to_string(lines.line_number()) +
                               " must start with `label inverse_label`");
    }
    gen.perm.resize(static_cast<std::size_t>(m));
    for (auto& x : gen.perm) {
      if (!(row >> x)) {
        throw std::runtime_error("action: line " + std::to_string(lines.line_number()) +
                                 " needs " + std::to_string(m) + " images");
      }
    }
    std::string extra;
    if (row >> extra) {
      throw std::runtime_error("action: line " + std::to_string(lines.line_number()) +
                               " has too many entries");
    }
    gens.push_back(std::move(gen));
  }
  if (lines.has_more()) throw std::runtime_error("action: more lines than declared");
  return PermutationAction::build(static_cast<int>(m), std::move(gens));
}

void write_action(std::ostream& out, const PermutationAction& a) {
  out << a.size() << ' ' << a.generators().size() << '\n';
  for (const auto& gen : a.generators()) {
    out << gen.label << ' ' << gen.inverse_label;
    for (int x : gen.perm) out << ' ' << x;
    out << '\n';
  }
}

PermutationAction load_action(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_action(in);
}

void save_action(const std::filesystem::path& path, const PermutationAction& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_action(out, a);
}

// ---------------------------------------------------------------------------

namespace {

double entrywise_power(const Eigen::MatrixXd& x, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x.data()[i]), p);
  return s;
}

// Generators up to inversion; s and s^-1 displace every vector equally.
std::vector<int> representatives(const PermutationAction& a) {
  std::vector<int> out;
  for (int g = 0; g < static_cast<int>(a.generators().size()); ++g) {
    if (g <= a.inverse_index(g)) out.push_back(g);
  }
  return out;
}

detail::Objective kappa_objective(const PermutationAction& a, const std::vector<int>& reps,
                                  double p, double beta, double mu) {
  const detail::NormPower phi(p, p, mu);
  return [&a, &reps, phi, beta](const Eigen::MatrixXd& x, Eigen::MatrixXd* grad) {
    const int m = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    Eigen::RowVectorXd diff(d);
    double den = 0.0;
    for (int c = 0; c < m; ++c) den += phi.value(x.row(c));
    if (!(den > 0.0)) {
      if (grad) grad->setZero();
      return std::numeric_limits<double>::infinity();
    }
    std::vector<double> ratio(reps.size());
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const auto& perm = a.generators()[static_cast<std::size_t>(reps[k])].perm;
      double num = 0.0;
      for (int c = 0; c < m; ++c) {
        diff.noalias() = x.row(perm[static_cast<std::size_t>(c)]) - x.row(c);
        num += phi.value(diff);
      }
      ratio[k] = num / den;
    }
    const double top = *std::max_element(ratio.begin(), ratio.end());
    std::vector<double> weight(reps.size());
    double z = 0.0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      weight[k] = std::exp(beta * (ratio[k] - top));
      z += weight[k];
    }
    const double value = top + std::log(z) / beta;
    if (grad) {
      grad->setZero();
      Eigen::RowVectorXd acc(d);
      double weighted_ratio = 0.0;
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const double w = weight[k] / z;
        weighted_ratio += w * ratio[k];
        const auto& perm = a.generators()[static_cast<std::size_t>(reps[k])].perm;
        for (int c = 0; c < m; ++c) {
          const int sc = perm[static_cast<std::size_t>(c)];
          diff.noalias() = x.row(sc) - x.row(c);
          acc.setZero();
          phi.add_gradient(diff, w / den, acc);
          grad->row(sc) += acc;
          grad->row(c) -= acc;
        }
      }
      for (int c = 0; c < m; ++c) {
        acc.setZero();
        phi.add_gradient(x.row(c), -weighted_ratio / den, acc);
        grad->row(c) += acc;
      }
    }
    return value;
  };
}

Eigen::MatrixXd laplacian_matrix(const MultiGraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    lap(e.u, e.v) -= e.multiplicity;
    lap(e.v, e.u) -= e.multiplicity;
    lap(e.u, e.u) += e.multiplicity;
    lap(e.v, e.v) += e.multiplicity;
  }
  return lap;
}

}  // namespace

int stabilized_dimension(const PermutationAction& a) {
  return static_cast<int>(representatives(a).size()) + 1;
}

double displacement(const PermutationAction& a, int g, const Eigen::MatrixXd& xi, double p) {
  if (g < 0 || g >= static_cast<int>(a.generators().size())) {
    throw std::out_of_range("displacement: generator index out of range");
  }
  if (xi.rows() != a.size()) throw std::invalid_argument("displacement: wrong number of rows");
  const double den = entrywise_power(xi, p);
  if (!(den > 0.0)) throw std::invalid_argument("displacement: xi is zero");
  const auto& perm = a.generators()[static_cast<std::size_t>(g)].perm;
  double num = 0.0;
  for (int c = 0; c < a.size(); ++c) {
    for (Eigen::Index j = 0; j < xi.cols(); ++j) {
      num += std::pow(std::abs(xi(perm[static_cast<std::size_t>(c)], j) - xi(c, j)), p);
    }
  }
  return std::pow(num / den, 1.0 / p);
}

KappaEstimate kappa_estimate(const PermutationAction& a, double p, int d, const KappaOptions& opts,
                             const DescentOptions& gap_opts) {
  if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("kappa_estimate: need p >= 1");
  if (d < 0) throw std::invalid_argument("kappa_estimate: need d >= 0");
  if (opts.restarts < 1 || opts.max_iter < 1) {
    throw std::invalid_argument("kappa_estimate: need restarts >= 1 and max_iter >= 1");
  }
  const int m = a.size();
  if (m < 2) throw std::invalid_argument("kappa_estimate: need at least two cosets");
  const MultiGraph g = schreier_graph(a);
  const auto reps = representatives(a);
  if (reps.empty()) throw std::invalid_argument("kappa_estimate: empty generating set");

  if (d == 0) d = stabilized_dimension(a);
  // lambda_1(G; l_p^d, p) does not depend on d, so the line suffices.
  const GapEstimate gap = best_gap(g, p, p, 1, gap_opts);
  const int s_count = static_cast<int>(a.generators().size());

  struct Stage {
    double beta;
    double mu;
  };
  std::vector<Stage> stages;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m) * d);
  const double betas[] = {1e1, 1e2, 1e3, 1e4, 1e5};
  for (int i = 0; i < 5; ++i) {
    stages.push_back({betas[i], p < 2.0 ? scale * std::pow(10.0, -(i + 1)) : 0.0});
  }
  if (p < 2.0) stages.push_back({1e5, 0.0});

  // Warm starts: the Fiedler vector, and for d > 1 the low Laplacian
  // eigenvectors spread over the columns.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(laplacian_matrix(g));
  std::vector<Eigen::MatrixXd> warm;
  {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, d);
    w.col(0) = eigen.eigenvectors().col(1);
    warm.push_back(std::move(w));
  }
  if (d > 1) {
    Eigen::MatrixXd w(m, d);
    for (int j = 0; j < d; ++j) w.col(j) = eigen.eigenvectors().col(1 + (j % (m - 1)));
    warm.push_back(std::move(w));
  }
  const int restarts = std::max<int>(opts.restarts, static_cast<int>(warm.size()));
  struct Result {
    Eigen::MatrixXd point;
    double value = std::numeric_limits<double>::infinity();
    long long iterations = 0;
  };
  std::vector<Result> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Eigen::MatrixXd start(m, d);
    if (r < warm.size()) {
      start = warm[r];
    } else {
      std::mt19937_64 rng(detail::stream_seed(opts.seed, r));
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] = normal(rng);
    }
    Result& res = results[r];
    for (std::size_t k = 0; k < stages.size(); ++k) {
      detail::DescentSettings settings;
      const bool last = k + 1 == stages.size();
      settings.max_iter = last ? opts.max_iter : std::max(200, opts.max_iter / 5);
      settings.tol = last ? opts.tol : std::max(opts.tol, 1e-9);
      auto outcome = detail::sphere_descent(kappa_objective(a, reps, p, stages[k].beta, stages[k].mu),
                                            std::move(start), settings);
      res.iterations += outcome.iterations;
      start = std::move(outcome.point);
    }
    res.point = std::move(start);
    if (entrywise_power(res.point, p) > 0.0) {
      double worst = 0.0;
      for (int gi : reps) worst = std::max(worst, displacement(a, gi, res.point, p));
      res.value = worst;
    }
  });

  std::size_t best = 0;
  long long total = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    total += results[r].iterations;
    if (results[r].value < results[best].value) best = r;
  }
  if (!std::isfinite(results[best].value)) {
    throw std::runtime_error("kappa_estimate: every restart degenerated");
  }

  KappaEstimate out;
  out.minimizer = results[best].point;
  out.minimizer.rowwise() -= out.minimizer.colwise().mean();
  out.minimizer /= std::pow(entrywise_power(out.minimizer, p), 1.0 / p);
  out.p = p;
  out.d = d;
  out.gap = gap.value;
  out.lower_certified = gap.bound_kind == BoundKind::exact;
  out.lower_from_gap = std::pow(2.0 * gap.value / s_count, 1.0 / p);
  out.diagnostics.restarts = restarts;
  out.diagnostics.best_restart = static_cast<int>(best);
  out.diagnostics.total_iterations = total;
  double worst = 0.0;
  for (int gi = 0; gi < s_count; ++gi) {
    const double v = displacement(a, gi, out.minimizer, p);
    out.diagnostics.per_generator.push_back(v);
    worst = std::max(worst, v);
  }
  out.value = worst;
  return out;
}

NuResult pak_zuk_nu(const PermutationAction& a, std::span<const LabelMap> Q) {
  const auto& gens = a.generators();
  const int s = static_cast<int>(gens.size());
  if (s == 0) throw std::invalid_argument("pak_zuk_nu: empty generating set");
  std::vector<int> parent(static_cast<std::size_t>(s));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  for (const LabelMap& q : Q) {
    if (q.size() != gens.size()) {
      throw std::invalid_argument("pak_zuk_nu: automorphism does not cover S");
    }
    std::set<std::string> image;
    std::vector<int> mapped(static_cast<std::size_t>(s));
    for (int g = 0; g < s; ++g) {
      const auto it = q.find(gens[static_cast<std::size_t>(g)].label);
      if (it == q.end()) throw std::invalid_argument("pak_zuk_nu: automorphism misses a label");
      const auto target = a.index_of(it->second);
      if (!target) throw std::invalid_argument("pak_zuk_nu: automorphism leaves S: " + it->second);
      image.insert(it->second);
      mapped[static_cast<std::size_t>(g)] = *target;
    }
    if (image.size() != gens.size()) {
      throw std::invalid_argument("pak_zuk_nu: automorphism is not a bijection of S");
    }
    for (int g = 0; g < s; ++g) {
      if (mapped[static_cast<std::size_t>(a.inverse_index(g))] !=
          a.inverse_index(mapped[static_cast<std::size_t>(g)])) {
        throw std::invalid_argument("pak_zuk_nu: automorphism does not commute with inversion");
      }
      const int x = find(g);
      const int y = find(mapped[static_cast<std::size_t>(g)]);
      if (x != y) parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
    }
  }

  std::map<int, std::vector<std::string>> groups;
  for (int g = 0; g < s; ++g) groups[find(g)].push_back(gens[static_cast<std::size_t>(g)].label);
  NuResult out;
  std::size_t smallest = gens.size();
  for (auto& [root, labels] : groups) {
    smallest = std::min(smallest, labels.size());
    out.orbits.push_back(std::move(labels));
  }
  out.nu = static_cast<double>(s) / static_cast<double>(smallest);
  return out;
}

SandwichReport check_sandwich(double kappa, double lambda, int generators, double p,
                              std::optional<double> nu, double tolerance) {
  SandwichReport r;
  r.kappa = kappa;
  r.lambda = lambda;
  r.p = p;
  r.generators = generators;
  r.nu = nu;
  r.tolerance = tolerance;
  const double kp = std::pow(kappa, p);
  const double top = 0.5 * generators * kp;
  r.lower_slack = lambda - kp;
  r.upper_slack = top - lambda;
  r.lower_ok = kp <= lambda * (1.0 + tolerance) + 1e-12;
  r.upper_ok = lambda <= top * (1.0 + tolerance) + 1e-12;
  if (nu) {
    const double pz = top / *nu;
    r.pak_zuk_slack = lambda - pz;
    r.pak_zuk_ok = pz <= lambda * (1.0 + tolerance) + 1e-12;
  }
  return r;
}

SandwichReport verify_sandwich(const PermutationAction& a, double p, int d, std::optional<double> nu,
                               const KappaOptions& kopts, const DescentOptions& gopts,
                               double tolerance) {
  const KappaEstimate k = kappa_estimate(a, p, d, kopts, gopts);
  SandwichReport r = check_sandwich(k.value, k.gap, static_cast<int>(a.generators().size()), p, nu,
                                    tolerance);
  r.lambda_kind = k.lower_certified ? BoundKind::exact : BoundKind::upper;
  return r;
}

}  // namespace bgap
