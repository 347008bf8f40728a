#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "bgap/distortion.hpp"
#include "bgap/generators.hpp"
#include "bgap/graph_io.hpp"
#include "bgap/groups.hpp"
#include "bgap/gross.hpp"
#include "bgap/mazur.hpp"
#include "bgap/parallel.hpp"
#include "bgap/spectral.hpp"
#include "report.hpp"

namespace bgap::cli {

namespace {

namespace fs = std::filesystem;

// Reported tolerance of eigensolver values.
constexpr double kEigenTolerance = 1e-9;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string name;
  MultiGraph graph;
  std::optional<PermutationAction> action;
  std::optional<GroupSpec> group;
  std::optional<FamilySpec> family;
};

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '/' || c == ' ') c = '_';
  }
  return s;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw UsageError("bad index list: " + text);
    out.push_back(v);
  }
  return out;
}

PermutationAction load_group_action(const RunConfig& cfg, std::optional<GroupSpec>* spec_out) {
  if (!cfg.group.empty()) {
    const GroupSpec spec = parse_group(cfg.group);
    if (spec_out) *spec_out = spec;
    const std::vector<int> sub = parse_index_list(cfg.subgroup);
    return action_from_group(spec, sub);
  }
  if (!cfg.action_file.empty()) return load_action(cfg.action_file);
  throw UsageError("need --group or --action");
}

Source load_source(const RunConfig& cfg, bool allow_group) {
  const int given = !cfg.gen.empty() + !cfg.graph_file.empty() +
                    (allow_group && (!cfg.group.empty() || !cfg.action_file.empty()));
  if (given != 1) {
    throw UsageError(allow_group ? "give exactly one of --gen, --graph, --group, --action"
                                 : "give exactly one of --gen, --graph");
  }
  Source src;
  if (!cfg.gen.empty()) {
    src.family = parse_family(cfg.gen);
    src.graph = generate(*src.family, cfg.seed);
    src.name = cfg.gen;
  } else if (!cfg.graph_file.empty()) {
    src.graph = load_edge_list(cfg.graph_file);
    src.name = fs::path(cfg.graph_file).filename().string();
  } else {
    src.action = load_group_action(cfg, &src.group);
    src.graph = schreier_graph(*src.action);
    src.name = src.group ? src.group->to_string() : fs::path(cfg.action_file).filename().string();
  }
  return src;
}

DescentOptions descent_options(const RunConfig& cfg) {
  DescentOptions o;
  if (cfg.restarts >= 0) o.restarts = cfg.restarts;
  if (cfg.max_iter > 0) o.max_iter = cfg.max_iter;
  o.tol = cfg.tol;
  o.seed = cfg.seed;
  return o;
}

Format output_format(const RunConfig& cfg) { return cfg.format == "csv" ? Format::csv : Format::json; }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void emit(const RunConfig& cfg, const Report& report, std::ostream& out) {
  const Format format = output_format(cfg);
  const std::string text = render(report, format);
  out << text;
  if (!cfg.out_dir.empty()) {
    write_file(fs::path(cfg.out_dir) / (report.command + (format == Format::json ? ".json" : ".csv")), text);
  }
}

Json gap_row(const std::string& name, const MultiGraph& g, const GapEstimate& est, double tol) {
  Json row;
  row["graph"] = name;
  row["vertices"] = g.num_vertices();
  row["p"] = num(est.p);
  row["q"] = num(est.q);
  row["d"] = est.d;
  row["value"] = num(est.value);
  row["method"] = std::string(to_string(est.method));
  row["bound_kind"] = std::string(to_string(est.bound_kind));
  switch (est.method) {
    case GapMethod::eigen_exact: row["tolerance"] = num(kEigenTolerance); break;
    case GapMethod::grid_oracle: row["tolerance"] = num(est.diagnostics.error_bound); break;
    case GapMethod::multistart_descent: row["tolerance"] = num(tol); break;
  }
  if (est.method == GapMethod::multistart_descent) {
    row["restarts"] = est.diagnostics.restarts;
    row["best_restart"] = est.diagnostics.best_restart;
    row["iterations"] = est.diagnostics.total_iterations;
    row["converged"] = est.diagnostics.converged;
  }
  return row;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << "v";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ",c" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << num(m(i, j)).dump();
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  Report report;
  report.command = "gen";
  if (!cfg.group.empty() || !cfg.action_file.empty()) {
    std::optional<GroupSpec> spec;
    const PermutationAction a = load_group_action(cfg, &spec);
    const MultiGraph g = schreier_graph(a);
    if (cfg.out_dir.empty()) {
      write_action(out, a);
      return 0;
    }
    const std::string stem = file_safe(spec ? spec->to_string() : fs::path(cfg.action_file).stem().string());
    const fs::path action_path = fs::path(cfg.out_dir) / (stem + ".action");
    const fs::path graph_path = fs::path(cfg.out_dir) / (stem + ".edges");
    fs::create_directories(cfg.out_dir);
    save_action(action_path, a);
    save_edge_list(graph_path, g);
    Json row;
    row["action_file"] = action_path.string();
    row["graph_file"] = graph_path.string();
    row["cosets"] = a.size();
    row["generators"] = static_cast<int>(a.generators().size());
    row["max_degree"] = g.max_degree();
    row["regular"] = g.is_regular();
    row["method"] = "coset_enumeration";
    row["bound_kind"] = "exact";
    row["tolerance"] = 0;
    report.rows.push_back(row);
    emit(cfg, report, out);
    return 0;
  }
  if (cfg.gen.empty()) throw UsageError("gen needs --gen or --group");
  const FamilySpec spec = parse_family(cfg.gen);
  const MultiGraph g = generate(spec, cfg.seed);
  if (cfg.out_dir.empty()) {
    write_edge_list(out, g);
    return 0;
  }
  const fs::path path = fs::path(cfg.out_dir) / (file_safe(spec.to_string()) + ".edges");
  fs::create_directories(cfg.out_dir);
  save_edge_list(path, g);
  Json row;
  row["graph_file"] = path.string();
  row["vertices"] = g.num_vertices();
  row["edge_classes"] = static_cast<int>(g.edges().size());
  row["max_degree"] = g.max_degree();
  row["regular"] = g.is_regular();
  row["method"] = "generator";
  row["bound_kind"] = "exact";
  row["tolerance"] = 0;
  report.rows.push_back(row);
  emit(cfg, report, out);
  return 0;
}

int cmd_gap(const RunConfig& cfg, const std::string& method, double resolution, std::ostream& out) {
  const Source src = load_source(cfg, true);
  const int d = cfg.d < 0 ? 1 : cfg.d;
  if (d < 1) throw UsageError("gap needs --d >= 1");
  const DescentOptions opts = descent_options(cfg);
  GapEstimate est;
  if (method == "auto") {
    est = best_gap(src.graph, cfg.p, cfg.q, d, opts);
  } else if (method == "exact") {
    if (cfg.p != 2.0 || (cfg.q != 2.0 && d != 1)) {
      throw UsageError("--method exact needs p = 2 and either q = 2 or d = 1");
    }
    est = gap_exact_2(src.graph);
    est.q = cfg.q;
    est.d = d;
  } else if (method == "estimate") {
    est = gap_estimate(src.graph, cfg.p, cfg.q, d, opts);
  } else {
    if (d != 1) throw UsageError("--method oracle needs d = 1");
    est = gap_oracle_small(src.graph, cfg.p, resolution);
  }
  Report report;
  report.command = "gap";
  report.meta["seed"] = cfg.seed;
  report.rows.push_back(gap_row(src.name, src.graph, est, opts.tol));
  if (!cfg.out_dir.empty()) {
    write_file(fs::path(cfg.out_dir) / "gap_minimizer.csv", matrix_csv(est.minimizer.values));
  }
  emit(cfg, report, out);
  return 0;
}

int cmd_kappa(const RunConfig& cfg, std::optional<double> nu_arg, double tolerance, std::ostream& out) {
  std::optional<GroupSpec> spec;
  const PermutationAction a = load_group_action(cfg, &spec);
  const int d = cfg.d < 0 ? 0 : cfg.d;
  KappaOptions kopts;
  if (cfg.restarts >= 0) kopts.restarts = cfg.restarts;
  if (cfg.max_iter > 0) kopts.max_iter = cfg.max_iter;
  kopts.tol = cfg.tol;
  kopts.seed = cfg.seed;
  const KappaEstimate k = kappa_estimate(a, cfg.p, d, kopts, descent_options(cfg));

  std::optional<double> nu = nu_arg;
  std::vector<std::vector<std::string>> orbits;
  if (!nu && spec) {
    const std::vector<LabelMap> Q = standard_automorphisms(*spec);
    const NuResult r = pak_zuk_nu(a, Q);
    nu = r.nu;
    orbits = r.orbits;
  }
  const int s_count = static_cast<int>(a.generators().size());
  SandwichReport sw = check_sandwich(k.value, k.gap, s_count, cfg.p, nu, tolerance);
  sw.lambda_kind = k.lower_certified ? BoundKind::exact : BoundKind::upper;

  Report report;
  report.command = "kappa";
  report.meta["seed"] = cfg.seed;
  Json per = Json::array();
  for (int g = 0; g < s_count; ++g) {
    per.push_back({{"label", a.generators()[static_cast<std::size_t>(g)].label},
                   {"displacement", num(k.diagnostics.per_generator[static_cast<std::size_t>(g)])}});
  }
  report.meta["per_generator"] = per;
  if (!orbits.empty()) report.meta["orbits"] = orbits;

  Json row;
  row["action"] = spec ? spec->to_string() : cfg.action_file;
  row["cosets"] = a.size();
  row["generators"] = s_count;
  row["p"] = num(cfg.p);
  row["d"] = k.d;
  row["kappa"] = num(k.value);
  row["lower_from_gap"] = num(k.lower_from_gap);
  row["lower_certified"] = k.lower_certified;
  row["lambda"] = num(k.gap);
  row["lambda_kind"] = std::string(to_string(sw.lambda_kind));
  row["nu"] = nu ? num(*nu) : Json(nullptr);
  row["lower_slack"] = num(sw.lower_slack);
  row["upper_slack"] = num(sw.upper_slack);
  row["pak_zuk_slack"] = sw.pak_zuk_slack ? num(*sw.pak_zuk_slack) : Json(nullptr);
  row["lower_ok"] = sw.lower_ok;
  row["upper_ok"] = sw.upper_ok;
  row["pak_zuk_ok"] = sw.pak_zuk_ok;
  row["method"] = "smoothed_max_descent";
  row["bound_kind"] = std::string(to_string(k.bound_kind));
  row["tolerance"] = num(tolerance);
  report.rows.push_back(row);
  if (!cfg.out_dir.empty()) {
    write_file(fs::path(cfg.out_dir) / "kappa_minimizer.csv", matrix_csv(k.minimizer));
  }
  emit(cfg, report, out);
  return sw.passed() ? 0 : 1;
}

int cmd_gross(const RunConfig& cfg, bool verify, std::ostream& out) {
  const Source src = load_source(cfg, false);
  const SchreierSpec spec = schreier_realize(src.graph, cfg.seed);
  Report report;
  report.command = "gross";
  report.meta["seed"] = cfg.seed;
  Json row;
  row["graph"] = src.name;
  row["vertices"] = src.graph.num_vertices();
  row["max_degree"] = src.graph.max_degree();
  row["base_degree"] = spec.base.degree(0);
  row["factors"] = static_cast<int>(spec.factors.perms.size());
  row["generators"] = 2 * static_cast<int>(spec.factors.perms.size());
  bool ok = true;
  if (verify) {
    const RealizationCheck check = verify_realization(spec);
    ok = check.ok;
    row["realization_ok"] = check.ok;
    row["missing"] = static_cast<int>(check.missing.size());
    row["extra"] = static_cast<int>(check.extra.size());
    Json diff = Json::array();
    for (const Edge& e : check.missing) diff.push_back({{"u", e.u}, {"v", e.v}, {"missing", e.multiplicity}});
    for (const Edge& e : check.extra) diff.push_back({{"u", e.u}, {"v", e.v}, {"extra", e.multiplicity}});
    report.meta["realization_diff"] = diff;
  }
  if (src.graph.num_vertices() >= 2) {
    row["gap_ratio"] = num(gap_exact_2(spec.base).value / gap_exact_2(src.graph).value);
  }
  row["method"] = "euler_circuit_matching";
  row["bound_kind"] = "exact";
  row["tolerance"] = 0;
  report.rows.push_back(row);
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    save_edge_list(fs::path(cfg.out_dir) / "gross_base.edges", spec.base);
    save_action(fs::path(cfg.out_dir) / "gross.action", spec.action());
  }
  emit(cfg, report, out);
  return ok ? 0 : 1;
}

struct DistortArgs {
  double eps = 0.5;
  std::string displacement = "auto";
  std::string embedding = "auto";
  std::string sweep;
  std::vector<double> austin;
};

int cmd_distort_sweep(const RunConfig& cfg, const DistortArgs& args, std::ostream& out) {
  const auto colon = args.sweep.find(':');
  if (colon == std::string::npos) throw UsageError("--sweep expects nmin:nmax");
  const int lo = std::stoi(args.sweep.substr(0, colon));
  const int hi = std::stoi(args.sweep.substr(colon + 1));
  const std::vector<SweepRow> rows = hamming_sweep(lo, hi, cfg.p, descent_options(cfg));
  Report report;
  report.command = "distort";
  report.meta["family"] = "hamming";
  report.meta["p"] = num(cfg.p);
  std::vector<double> diams;
  std::vector<double> lower;
  for (const SweepRow& r : rows) {
    Json row;
    row["n"] = r.n;
    row["diam"] = r.diam;
    row["lower_gn"] = num(r.lower_gn);
    row["lower_jv"] = num(r.lower_jv);
    row["upper"] = num(r.upper);
    row["target_order"] = num(r.target_order);
    row["certified"] = r.certified;
    row["method"] = "hamming_sweep";
    row["bound_kind"] = r.certified ? "exact" : "upper";
    row["tolerance"] = r.certified ? num(kEigenTolerance) : num(cfg.tol);
    report.rows.push_back(row);
    diams.push_back(r.diam);
    lower.push_back(std::max(r.lower_gn, r.lower_jv));
  }
  if (!args.austin.empty()) {
    Json list = Json::array();
    for (double e : args.austin) {
      const AustinReport a = austin_exclude(diams, lower, [e](double t) { return std::pow(t, e); });
      list.push_back({{"rho_exponent", num(e)},
                      {"verdict", std::string(to_string(a.verdict))},
                      {"slope", num(a.slope)},
                      {"reason", a.reason}});
    }
    report.meta["austin"] = list;
  }
  emit(cfg, report, out);
  return 0;
}

int cmd_distort(const RunConfig& cfg, const DistortArgs& args, std::ostream& out) {
  if (!args.sweep.empty()) return cmd_distort_sweep(cfg, args, out);
  const Source src = load_source(cfg, true);
  const int d = cfg.d < 0 ? 1 : cfg.d;
  BoundsOptions bopts;
  bopts.eps = args.eps;
  bopts.descent = descent_options(cfg);
  bopts.displacement.seed = cfg.seed;
  if (src.action) bopts.displacement.action = &*src.action;
  if (args.displacement != "auto") {
    bopts.mode = parse_displacement_mode(args.displacement);
    if (!bopts.mode) throw UsageError("unknown displacement mode " + args.displacement);
    if (*bopts.mode == DisplacementMode::cayley && !src.action) {
      throw UsageError("cayley displacement needs --group or --action");
    }
  }
  std::string embedding = args.embedding;
  if (embedding == "auto") {
    embedding = "frechet";
    if (src.family && src.family->kind == Family::hamming) embedding = "identity";
    if (src.family && src.family->kind == Family::cycle) embedding = "polygon";
  }
  if (embedding == "identity") {
    if (!src.family || src.family->kind != Family::hamming) throw UsageError("identity embedding needs --gen hamming:n");
    bopts.embedding = hamming_identity_embedding(src.family->params.at(0), cfg.q);
    bopts.embedding_name = "identity";
  } else if (embedding == "polygon") {
    if (!src.family || src.family->kind != Family::cycle) throw UsageError("polygon embedding needs --gen cycle:n");
    bopts.embedding = cycle_polygon_embedding(src.family->params.at(0), cfg.q);
    bopts.embedding_name = "polygon";
  } else if (embedding != "frechet") {
    throw UsageError("unknown embedding " + embedding);
  }
  const DistortionBounds b = distortion_bounds(src.graph, src.name, cfg.p, cfg.q, d, bopts);
  Report report;
  report.command = "distort";
  report.meta["seed"] = cfg.seed;
  Json row;
  row["graph"] = b.graph;
  row["vertices"] = src.graph.num_vertices();
  row["p"] = num(b.p);
  row["q"] = num(b.q);
  row["d"] = b.d;
  row["gap"] = num(b.gap.value);
  row["eps"] = num(b.eps);
  row["r_eps"] = num(b.r_eps.value);
  row["r_eps_exact"] = b.r_eps_exact;
  row["gn_lower"] = num(b.gn_lower.value);
  row["displacement"] = b.displacement.value;
  row["displacement_mode"] = std::string(to_string(b.displacement.mode));
  row["displacement_exact"] = b.displacement.exact;
  row["jv_lower"] = num(b.jv_lower.value);
  row["best_lower"] = num(b.best_lower());
  row["certified"] = b.gn_lower.certified && b.displacement.exact;
  if (b.upper) {
    row["upper"] = num(b.upper->distortion);
    row["upper_embedding"] = b.upper_description;
    row["upper_exact_squared"] = b.upper->exact ? Json(std::to_string(b.upper->squared_num) + "/" +
                                                       std::to_string(b.upper->squared_den))
                                                 : Json(nullptr);
  }
  row["method"] = "gn_jv_bounds";
  row["bound_kind"] = std::string(to_string(b.gap.bound_kind));
  row["tolerance"] = b.gap.bound_kind == BoundKind::exact ? num(kEigenTolerance) : num(cfg.tol);
  report.rows.push_back(row);
  emit(cfg, report, out);
  return 0;
}

struct MazurArgs {
  int dim = 16;
  std::string sampler = "near_pairs";
  long long samples = 100000;
  int blocks = 0;
  double outer = 2.0;
  std::optional<double> C;
  std::optional<double> alpha;
};

int cmd_mazur(const RunConfig& cfg, const MazurArgs& args, std::ostream& out) {
  const std::optional<Sampler> sampler = parse_sampler(args.sampler);
  if (!sampler) throw UsageError("unknown sampler " + args.sampler);
  if (args.C.has_value() != args.alpha.has_value()) throw UsageError("give both --C and --alpha");
  std::optional<PowerModulus> bound;
  if (args.C) {
    bound = PowerModulus{*args.C, *args.alpha};
  } else if (cfg.q == 2.0) {
    bound = cfg.p >= 2.0 ? PowerModulus{cfg.p / 2.0, 1.0} : PowerModulus{4.0, cfg.p / 2.0};
  }
  const SphereMap phi = mazur(cfg.p, cfg.q, args.dim);
  const ModulusEstimate est = estimate_modulus(phi, *sampler, args.samples, cfg.seed, bound);

  Report report;
  report.command = "mazur";
  report.meta["seed"] = cfg.seed;
  long long violations = est.violations;
  Json row;
  row["map"] = phi.name;
  row["dim"] = args.dim;
  row["blocks"] = 1;
  row["sampler"] = std::string(to_string(*sampler));
  row["samples"] = est.n_samples;
  row["fitted_C"] = num(est.fitted_C);
  row["fitted_alpha"] = num(est.fitted_alpha);
  row["bound_C"] = bound ? num(bound->C) : Json(nullptr);
  row["bound_alpha"] = bound ? num(bound->alpha) : Json(nullptr);
  row["violations"] = bound ? Json(est.violations) : Json(nullptr);
  row["max_ratio"] = bound ? num(est.max_ratio) : Json(nullptr);
  row["method"] = "sampled_modulus";
  row["bound_kind"] = "sampled";
  row["tolerance"] = num(kModulusSlack);
  report.rows.push_back(row);

  if (args.blocks > 0) {
    if (!bound) throw UsageError("--blocks needs a modulus (--C/--alpha or q = 2)");
    const StabilizedCheck c =
        check_stabilized_modulus(phi, *bound, args.blocks, args.outer, *sampler, args.samples, cfg.seed + 1);
    violations += c.violations;
    Json s;
    s["map"] = phi.name;
    s["dim"] = args.dim;
    s["blocks"] = args.blocks;
    s["outer_p"] = num(args.outer);
    s["sampler"] = std::string(to_string(*sampler));
    s["samples"] = c.n_samples;
    s["bound_C"] = num(c.bound.C);
    s["bound_alpha"] = num(c.bound.alpha);
    s["violations"] = c.violations;
    s["max_ratio"] = num(c.max_ratio);
    s["method"] = "stabilized_modulus";
    s["bound_kind"] = "sampled";
    s["tolerance"] = num(kModulusSlack);
    report.rows.push_back(s);
  }
  if (!cfg.out_dir.empty()) {
    std::ostringstream csv;
    csv << "eps,delta\n";
    for (const auto& smp : est.samples) csv << num(smp.eps).dump() << ',' << num(smp.delta).dump() << '\n';
    write_file(fs::path(cfg.out_dir) / "mazur_samples.csv", csv.str());
  }
  emit(cfg, report, out);
  return violations == 0 ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, bool seed_given, std::ostream& out) {
  std::vector<int> ids;
  if (suite == "all") {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  } else {
    ids = parse_index_list(suite);
    for (int id : ids) {
      if (id < 1 || id > kCriterionCount) throw UsageError("no acceptance criterion " + std::to_string(id));
    }
  }
  AcceptanceOptions opts;
  if (seed_given) opts.seed = cfg.seed;
  Report report;
  report.command = "verify";
  report.meta["seed"] = opts.seed;
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, opts);
    out << format_line(r) << std::endl;
    all = all && r.passed;
    Json row;
    row["id"] = r.id;
    row["name"] = r.name;
    row["passed"] = r.passed;
    row["seconds"] = num(r.seconds);
    row["detail"] = r.detail;
    row["method"] = "acceptance";
    row["bound_kind"] = "exact";
    row["tolerance"] = nullptr;
    report.rows.push_back(row);
  }
  out << (all ? "all criteria passed" : "some criteria failed") << '\n';
  if (!cfg.out_dir.empty()) {
    const Format format = output_format(cfg);
    write_file(fs::path(cfg.out_dir) / (std::string("verify") + (format == Format::json ? ".json" : ".csv")),
               render(report, format));
  }
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Banach spectral gaps, displacement constants and distortion bounds", "bgap"};
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Outer exponent p >= 1");
    sub->add_option("--q", cfg.q, "Norm exponent of the target l_q^d");
    sub->add_option("--d", cfg.d, "Target dimension");
    sub->add_option("--restarts", cfg.restarts, "Optimizer restarts");
    sub->add_option("--tol", cfg.tol, "Optimizer tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "Optimizer iterations per stage");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_dir, "Directory for output files");
    sub->add_option("--threads", cfg.threads, "Worker thread cap (0: all cores)");
  };
  auto graph_source = [&cfg](CLI::App* sub) {
    sub->add_option("--gen", cfg.gen, "Generator spec, e.g. hamming:3 or random_regular:20:3");
    sub->add_option("--graph", cfg.graph_file, "Edge-list file");
  };
  auto group_source = [&cfg](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "Group spec: cyclic:n, boolean_cube:n, symmetric:n, sl_mod:n:k");
    sub->add_option("--action", cfg.action_file, "Permutation action file");
    sub->add_option("--subgroup", cfg.subgroup, "Comma-separated element indices generating H");
  };

  CLI::App* gen = app.add_subcommand("gen", "Write a generated graph or group action");
  common(gen);
  graph_source(gen);
  group_source(gen);

  std::string gap_method = "auto";
  double resolution = 1e-4;
  CLI::App* gap = app.add_subcommand("gap", "Spectral gap lambda_1(G; l_q^d, p)");
  common(gap);
  graph_source(gap);
  group_source(gap);
  gap->add_option("--method", gap_method, "auto, exact, estimate or oracle")
      ->check(CLI::IsMember({"auto", "exact", "estimate", "oracle"}));
  gap->add_option("--resolution", resolution, "Oracle grid spacing");

  std::optional<double> nu;
  double sandwich_tol = 1e-2;
  CLI::App* kappa = app.add_subcommand("kappa", "Displacement constant and sandwich check");
  common(kappa);
  group_source(kappa);
  kappa->add_option("--nu", nu, "Orbit constant; computed for --group when omitted");
  kappa->add_option("--tolerance", sandwich_tol, "Relative slack of the sandwich checks");

  bool verify_flag = false;
  CLI::App* gross = app.add_subcommand("gross", "Realize a graph as a Schreier graph of a free group");
  common(gross);
  graph_source(gross);
  gross->add_flag("--verify", verify_flag, "Compare edge multisets");

  DistortArgs dargs;
  CLI::App* distort = app.add_subcommand("distort", "Distortion lower and upper bounds");
  common(distort);
  graph_source(distort);
  group_source(distort);
  distort->add_option("--eps", dargs.eps, "Subset fraction for r_eps");
  distort->add_option("--displacement", dargs.displacement, "auto, brute, heuristic, matching, cayley");
  distort->add_option("--embedding", dargs.embedding, "auto, identity, polygon, frechet");
  distort->add_option("--sweep", dargs.sweep, "Hamming cube sweep nmin:nmax");
  distort->add_option("--austin", dargs.austin, "Compression exponents to test on the sweep");

  MazurArgs margs;
  CLI::App* maz = app.add_subcommand("mazur", "Sampled moduli of Mazur maps");
  common(maz);
  maz->add_option("--dim", margs.dim, "Sphere dimension");
  maz->add_option("--sampler", margs.sampler, "uniform_sphere, antipodal_pairs, near_pairs");
  maz->add_option("--samples", margs.samples, "Number of pairs");
  maz->add_option("--blocks", margs.blocks, "Also check the stabilized map with this many blocks");
  maz->add_option("--outer", margs.outer, "Outer exponent of the stabilized map");
  maz->add_option("--C", margs.C, "Modulus constant");
  maz->add_option("--alpha", margs.alpha, "Modulus exponent");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");
  common(verify);
  verify->add_option("--suite", suite, "all or a comma-separated list of criteria");

  std::vector<const char*> argv{"bgap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const bool help = e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success);
    app.exit(e, out, err);
    return help ? 0 : 2;
  }

  set_max_threads(cfg.threads);
  try {
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (gap->parsed()) return cmd_gap(cfg, gap_method, resolution, out);
    if (kappa->parsed()) return cmd_kappa(cfg, nu, sandwich_tol, out);
    if (gross->parsed()) return cmd_gross(cfg, verify_flag, out);
    if (distort->parsed()) return cmd_distort(cfg, dargs, out);
    if (maz->parsed()) return cmd_mazur(cfg, margs, out);
    if (verify->parsed()) return cmd_verify(cfg, suite, verify->count("--seed") > 0, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace bgap::cli
