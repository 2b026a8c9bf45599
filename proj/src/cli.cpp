#include "iqp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "iqp/io.hpp"

namespace iqp::cli {

namespace {

Vec parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw std::invalid_argument("empty vector literal: '" + text + "'");
  Vec v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

std::string format_vector(const Vec& v) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v[i]);
    os << buf;
  }
  os << ']';
  return os.str();
}

struct SolveFlags {
  std::string problem_path;
  std::string method = "a";
  std::string x0_text;
  std::string out_path;
  std::string trace_path;
  double rho = 0.0;  // 0 means "choose automatically"
  double margin = 0.0;
  SolverConfig config;
};

void certify_rho(const SpectralBounds& bounds, DcaScheme scheme, double rho, bool unsafe,
                 std::ostream& err) {
  bool ok = scheme == DcaScheme::A ? rho > bounds.lambda_max_ub
                                   : rho + bounds.lambda_min_lb > 0.0;
  if (ok) return;
  if (!unsafe)
    throw std::invalid_argument(
        "rho fails certification for this scheme (pass --unsafe-rho to run anyway)");
  err << "warning: rho certification bypassed (--unsafe-rho); no convergence claim applies\n";
}

int run_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  io::LoadedProblem loaded = io::load_problem(f.problem_path);
  bench::Method method = bench::method_from_string(f.method);
  DcaScheme scheme = (method == bench::Method::dca_a || method == bench::Method::ode_a)
                         ? DcaScheme::A
                         : DcaScheme::B;

  if (std::holds_alternative<AviProblem>(loaded)) {
    // Only the explicit flow applies to nonsymmetric data.
    if (method != bench::Method::ode_a)
      throw std::invalid_argument("avi problems support --method ode-a only");
    const auto& p = std::get<AviProblem>(loaded);
    if (!(f.rho > 0.0))
      throw std::invalid_argument("avi problems need an explicit positive --rho");
    SolverConfig config = f.config;
    config.rho = f.rho;
    config.validate();
    Vec x0 = f.x0_text.empty() ? p.C.reference_point() : parse_vector(f.x0_text);
    VectorField field(SystemKind::SystemA, p, config.rho, config.eta);
    IntegrateOptions opts{config.h, config.horizon, 16};
    Trajectory traj = integrate(field, x0, opts);
    if (!f.trace_path.empty()) {
      std::ostringstream csv;
      io::write_trajectory_csv(csv, traj);
      io::write_file(f.trace_path, csv.str());
    }
    Vec final_point = traj.points.back();
    double residual = kkt_residual(p, final_point).value;
    long iterations = static_cast<long>(std::ceil(config.horizon / config.h - 1e-9));
    Termination term = residual <= config.residual_tol ? Termination::residual_tol
                                                       : Termination::max_time;
    out << "final_point=" << format_vector(final_point) << " residual=" << residual
        << " iterations=" << iterations << " termination=" << to_string(term) << "\n";
    if (!f.out_path.empty())
      io::write_file(f.out_path,
                     io::result_to_json(final_point, residual, iterations, term, 0.0).dump(2) + "\n");
    return residual <= config.residual_tol ? 0 : 1;
  }

  const auto& p = std::get<QuadraticProblem>(loaded);
  SpectralBounds bounds = gershgorin_bounds(p.Q);
  SolverConfig config = f.config;
  double margin = f.margin > 0.0
                      ? f.margin
                      : default_rho_margin(scheme == DcaScheme::A ? bounds.lambda_max_ub
                                                                  : bounds.lambda_min_lb);
  config.rho = f.rho > 0.0 ? f.rho : choose_rho(bounds, scheme, margin);
  config.validate();
  certify_rho(bounds, scheme, config.rho, config.unsafe_rho, err);
  Vec x0 = f.x0_text.empty() ? p.C.reference_point() : parse_vector(f.x0_text);

  Vec final_point;
  double residual = 0.0;
  long iterations = 0;
  Termination term = Termination::max_iter;
  double wall = 0.0;
  std::optional<double> rate;

  if (method == bench::Method::dca_a || method == bench::Method::dca_b) {
    DcaRun run = run_dca(p, scheme, config, x0);
    final_point = run.final_point;
    residual = run.trace.residuals.back();
    iterations = static_cast<long>(run.trace.iterates.size()) - 1;
    term = run.trace.termination;
    wall = run.trace.wall_time;
    rate = run.rate_estimate;
  } else {
    VectorField field(method == bench::Method::ode_a ? SystemKind::SystemA : SystemKind::SystemB,
                      p, config.rho, config.eta, config.unsafe_rho);
    IntegrateOptions opts{config.h, config.horizon, 16};
    Trajectory traj = integrate(field, x0, opts);
    if (!f.trace_path.empty()) {
      std::ostringstream csv;
      io::write_trajectory_csv(csv, traj);
      io::write_file(f.trace_path, csv.str());
    }
    final_point = traj.points.back();
    auto settled = detect_limit(traj, std::min<long>(8, traj.points.size()),
                                10.0 * config.residual_tol);
    if (settled) final_point = *settled;
    residual = kkt_residual(p, final_point).value;
    iterations = static_cast<long>(std::ceil(config.horizon / config.h - 1e-9));
    term = residual <= config.residual_tol ? Termination::residual_tol : Termination::max_time;
  }

  out << "final_point=" << format_vector(final_point) << " residual=" << residual
      << " iterations=" << iterations << " termination=" << to_string(term) << "\n";
  if (!f.out_path.empty())
    io::write_file(f.out_path,
                   io::result_to_json(final_point, residual, iterations, term, wall, rate).dump(2) +
                       "\n");
  if (term == Termination::divergence_guard) return 1;
  return 0;
}

int run_classify(double alpha, double beta, std::ostream& out) {
  scalar::SpmVerdict v = scalar::classify_spm({alpha, beta});
  char buf[128];
  switch (v.cls) {
    case scalar::SpmClass::strongly_monotone:
      std::snprintf(buf, sizeof(buf), "strongly_monotone gamma=%g", *v.gamma);
      break;
    case scalar::SpmClass::strongly_pseudomonotone:
      std::snprintf(buf, sizeof(buf), "strongly_pseudomonotone gamma=%g", *v.gamma);
      break;
    case scalar::SpmClass::not_pseudomonotone:
      std::snprintf(buf, sizeof(buf), "not_pseudomonotone witness=(%g,%g)", v.witness->first,
                    v.witness->second);
      break;
    case scalar::SpmClass::identically_zero:
      std::snprintf(buf, sizeof(buf), "identically_zero");
      break;
  }
  out << buf << "\n";
  out << "in_cone=" << (v.in_cone ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"indefinite quadratic programs over convex sets: DCA iterations, projected "
               "dynamical systems, and the exact one-dimensional engine"};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->set_help_flag("--help", "print help");  // frees -h for the step flag
  solve->add_option("--problem", sf.problem_path, "problem JSON file")->required();
  solve->add_option("--method", sf.method, "a|b|ode-a|ode-b")->required();
  solve->add_option("--x0", sf.x0_text, "start point, comma-separated (default: reference point)");
  solve->add_option("--rho", sf.rho, "regularization weight (default: certified choice)");
  solve->add_option("--margin", sf.margin, "margin for the automatic rho");
  solve->add_option("--eta", sf.config.eta, "flow time constant");
  solve->add_option("--h", sf.config.h, "integrator step");
  solve->add_option("--T", sf.config.horizon, "integration horizon");
  solve->add_option("--tol", sf.config.residual_tol, "KKT residual tolerance");
  solve->add_option("--max-iter", sf.config.max_iter, "iteration cap");
  solve->add_option("--out", sf.out_path, "write result JSON here");
  solve->add_option("--trace-out", sf.trace_path, "write trajectory CSV here (ode methods)");
  solve->add_flag("--unsafe-rho", sf.config.unsafe_rho, "bypass rho certification");

  // --- classify ------------------------------------------------------------
  double cl_alpha = 0.0, cl_beta = 0.0;
  auto* classify = app.add_subcommand("classify", "strong pseudomonotonicity of alpha*x+beta on [-1,1]");
  classify->add_option("--alpha", cl_alpha)->required();
  classify->add_option("--beta", cl_beta)->required();

  // --- cone-map ------------------------------------------------------------
  double cm_alo = -3.0, cm_ahi = 3.0, cm_blo = -3.0, cm_bhi = 3.0;
  int cm_res = 201;
  std::string cm_out;
  auto* conemap = app.add_subcommand("cone-map", "membership grid of the strongly pseudomonotone cone");
  conemap->add_option("--alpha-min", cm_alo);
  conemap->add_option("--alpha-max", cm_ahi);
  conemap->add_option("--beta-min", cm_blo);
  conemap->add_option("--beta-max", cm_bhi);
  conemap->add_option("--resolution", cm_res);
  conemap->add_option("--out", cm_out, "CSV output path (default stdout)");

  // --- traj1d --------------------------------------------------------------
  double tj_alpha = 0.0, tj_beta = 0.0, tj_rho = 1.0, tj_eta = 1.0, tj_x0 = 0.0, tj_T = 50.0;
  std::string tj_out;
  auto* traj1d = app.add_subcommand("traj1d", "exact piecewise trajectory on [-1,1]");
  traj1d->add_option("--alpha", tj_alpha)->required();
  traj1d->add_option("--beta", tj_beta)->required();
  traj1d->add_option("--rho", tj_rho);
  traj1d->add_option("--eta", tj_eta);
  traj1d->add_option("--x0", tj_x0)->required();
  traj1d->add_option("--T", tj_T, "report the state at this time");
  traj1d->add_option("--out", tj_out, "segment CSV output path");

  // --- gen / bench ---------------------------------------------------------
  bench::InstanceSpec spec;
  std::string kind_text = "box";
  std::string gen_prefix = "instance";
  auto add_spec_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", spec.n, "dimension");
    cmd->add_option("--constraint", kind_text, "box|ball|polyhedron|unit_interval");
    cmd->add_option("--seed", spec.seed, "stream seed");
    cmd->add_option("--scale", spec.scale, "entry scale");
    cmd->add_option("--density", spec.density, "kept-entry fraction");
    cmd->add_option("--count", spec.count, "number of instances");
    cmd->add_flag("--indefinite,!--no-indefinite", spec.indefinite,
                  "center the eigenvalue bracket on zero");
  };

  auto* gen = app.add_subcommand("gen", "write random instances as problem files");
  add_spec_flags(gen);
  gen->add_option("--out-prefix", gen_prefix, "files are written as <prefix>_<k>.json");

  std::string bench_methods = "a,b";
  std::string bench_out = "report.csv";
  std::string bench_summary;
  double bench_margin = 0.5;
  SolverConfig bench_config;
  auto* bench_cmd = app.add_subcommand("bench", "batch-run methods on random instances");
  bench_cmd->set_help_flag("--help", "print help");
  add_spec_flags(bench_cmd);
  bench_cmd->add_option("--methods", bench_methods, "comma list from a,b,ode-a,ode-b");
  bench_cmd->add_option("--out", bench_out, "report CSV path");
  bench_cmd->add_option("--summary", bench_summary, "summary JSON path");
  bench_cmd->add_option("--rho-margin", bench_margin, "margin added to the certified rho");
  bench_cmd->add_option("--tol", bench_config.residual_tol);
  bench_cmd->add_option("--max-iter", bench_config.max_iter);
  bench_cmd->add_option("--h", bench_config.h);
  bench_cmd->add_option("--T", bench_config.horizon);
  bench_cmd->add_option("--eta", bench_config.eta);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) return run_solve(sf, out, err);
    if (*classify) return run_classify(cl_alpha, cl_beta, out);
    if (*conemap) {
      scalar::ConeMap map = scalar::cone_membership_map(cm_alo, cm_ahi, cm_blo, cm_bhi, cm_res);
      std::ostringstream csv;
      io::write_cone_map_csv(csv, map);
      if (cm_out.empty())
        out << csv.str();
      else
        io::write_file(cm_out, csv.str());
      return 0;
    }
    if (*traj1d) {
      scalar::ScalarProblem sp{tj_alpha, tj_beta};
      bool advisory = false;
      scalar::ExactTrajectory traj = scalar::exact_trajectory(sp, tj_rho, tj_eta, tj_x0);
      bool is_kkt = scalar::trajectory_limit_is_kkt(sp, tj_rho, tj_eta, tj_x0, &advisory);
      out << "limit=" << traj.limit << " x(T)=" << traj.eval(tj_T)
          << " segments=" << traj.segments.size() << " limit_is_kkt=" << (is_kkt ? "true" : "false");
      if (advisory) out << " advisory=rho<alpha";
      out << "\n";
      if (!tj_out.empty()) {
        std::ostringstream csv;
        io::write_segments_csv(csv, traj);
        io::write_file(tj_out, csv.str());
      }
      return 0;
    }
    if (*gen) {
      spec.kind = bench::constraint_kind_from_string(kind_text);
      auto instances = bench::generate_instances(spec);
      for (size_t i = 0; i < instances.size(); ++i) {
        std::string path = gen_prefix + "_" + std::to_string(i) + ".json";
        io::save_problem(path, io::LoadedProblem(instances[i]));
        out << path << "\n";
      }
      return 0;
    }
    if (*bench_cmd) {
      spec.kind = bench::constraint_kind_from_string(kind_text);
      std::vector<bench::Method> methods;
      std::stringstream ss(bench_methods);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) methods.push_back(bench::method_from_string(item));
      bench::BenchReport report = bench::run_benchmark(spec, methods, bench_config, bench_margin);
      std::ostringstream csv;
      io::write_bench_csv(csv, report);
      io::write_file(bench_out, csv.str());
      if (!bench_summary.empty())
        io::write_file(bench_summary, io::bench_summary_json(report).dump(2) + "\n");
      for (const auto& [m, s] : report.summary)
        out << bench::to_string(m) << ": median_iters=" << s.median_iters
            << " median_residual=" << s.median_residual << " failures=" << s.failures << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace iqp::cli
