#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "twisted/ball_eigen.hpp"
#include "twisted/cli.hpp"
#include "twisted/errors.hpp"
#include "twisted/params.hpp"
#include "twisted/shape_verify.hpp"
#include "twisted/twisted_eigen.hpp"
#include "twisted/wirtinger.hpp"

namespace twisted::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

ProblemParams params_of(const RunConfig& c) { return validate(c.p, c.q, c.dim); }

RunReport start_report(const RunConfig& c) {
  RunReport r;
  r.inputs = to_json(c);
  return r;
}

SweepSettings sweep_settings(const RunConfig& c) {
  SweepSettings s;
  s.total_volume = c.volume;
  s.steps = c.steps;
  s.min_fraction = c.min_fraction;
  s.tol = c.newton_tol;
  s.shoot = c.shoot_options();
  return s;
}

DirectOptions direct_options(const RunConfig& c) {
  DirectOptions o;
  o.cells = c.grid;
  return o;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// key,value rows for reports that have no table of their own.
std::string flat_csv(const RunReport& r) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : r.result.items()) {
    if (v.is_number()) os << "result." << k << ',' << fmt(v.get<double>()) << '\n';
    if (v.is_string()) os << "result." << k << ',' << v.get<std::string>() << '\n';
    if (v.is_boolean()) os << "result." << k << ',' << (v.get<bool>() ? "true" : "false") << '\n';
  }
  for (const auto& res : r.residuals) {
    os << "residual." << res.name << ',' << fmt(res.value) << '\n';
    os << "tolerance." << res.name << ',' << fmt(res.tolerance) << '\n';
    os << "pass." << res.name << ',' << (res.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace

RunReport cmd_ball(const RunConfig& c) {
  const auto P = params_of(c);
  auto report = start_report(c);
  report.result["sigma"] = scaling_exponent(P);
  if (c.method != "direct") {
    BallOptions o;
    o.shoot = c.shoot_options();
    const auto ball = ball_lambda(P, c.radius, o);
    report.result["lambda"] = ball.lambda;
    report.result["flux"] = ball.flux;
    report.result["euler_k"] = ball.euler_k;
    const SourceTerm source{ball.euler_k, 0.0};
    report.residuals.push_back(at_most("energy_identity", ball.energy_residual, 1e-8));
    report.residuals.push_back(
        at_most("euler", euler_profile_residual(ball.profile, P, source), 1e-6));
    report.residuals.push_back(
        at_most("pohozaev", pohozaev_residual(ball.profile, P, source).residual, 1e-6));
  }
  if (c.method != "structured") {
    const auto direct = ball_lambda_direct(P, c.radius, direct_options(c));
    report.result["direct_lambda"] = direct.lambda;
    report.result["direct_iterations"] = direct.iterations;
    if (c.method == "direct") {
      report.result["lambda"] = direct.lambda;
    } else {
      report.residuals.push_back(at_most(
          "oracle_gap", relative_gap(report.result["lambda"].get<double>(), direct.lambda), 1e-3));
    }
  }
  return report;
}

RunReport cmd_twisted(const RunConfig& c) {
  const auto P = params_of(c);
  auto report = start_report(c);
  double R1 = c.r1;
  double R2 = c.r2;
  if (R1 == 0.0 || R2 == 0.0) {
    const auto radii = split_radii(P, resolve_volume(P, c.volume), 0.5);
    if (R1 == 0.0) R1 = radii.first;
    if (R2 == 0.0) R2 = radii.second;
  }
  TwistedConfig cfg{P, R1, R2};
  cfg.tol = c.newton_tol;
  cfg.shoot = c.shoot_options();
  const bool equal = std::abs(R1 - R2) <= 1e-12 * std::max(R1, R2);
  report.flags["equal_radii"] = equal;

  auto describe = [&](const TwistedResult& t, const std::string& prefix) {
    report.result[prefix + "lambda"] = t.lambda;
    report.result[prefix + "m"] = t.m;
    report.result[prefix + "k"] = t.k;
    report.result[prefix + "c1"] = t.c1;
    report.result[prefix + "c2"] = t.c2;
    report.result[prefix + "f1"] = t.f1;
    report.result[prefix + "f2"] = t.f2;
    report.result[prefix + "iterations"] = t.iterations;
  };

  std::optional<TwistedResult> structured;
  if (c.method != "direct") {
    structured = twisted_structured(cfg);
    report.result["R1"] = R1;
    report.result["R2"] = R2;
    describe(*structured, "");
    report.residuals.push_back(at_most("moment", structured->moment_residual, 1e-8));
    report.residuals.push_back(at_most("euler_model", structured->model_residual, 1e-6));
    if (equal) {
      report.residuals.push_back(at_most("flux", check_flux_equality(*structured), 1e-8));
    }
    const auto mult = multiplier_report(*structured);
    report.flags["multiplier"] = mult.pass ? "PASS" : "FLAG";
    report.flags["euler_zero_multiplier"] = mult.euler_residual;
  }
  if (c.method != "structured") {
    const auto direct = twisted_direct(cfg, direct_options(c));
    if (!structured) {
      report.result["R1"] = R1;
      report.result["R2"] = R2;
    }
    describe(direct, "direct_");
    report.residuals.push_back(at_most("direct_moment", direct.moment_residual, 1e-6));
    if (structured) {
      report.residuals.push_back(
          at_most("oracle_gap", relative_gap(structured->lambda, direct.lambda), 1e-3));
    } else {
      report.result["lambda"] = direct.lambda;
    }
  }
  return report;
}

RunReport cmd_sweep(const RunConfig& c) {
  const auto P = params_of(c);
  auto report = start_report(c);
  const auto settings = sweep_settings(c);
  const auto records = sweep_volume(P, settings);
  const auto summary = summarize_sweep(records);

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "R1,R2,lambda,f1,f2,m,status\n";
  for (const auto& r : records) {
    const bool ok = r.status == "ok";
    csv << fmt(r.R1) << ',' << fmt(r.R2) << ',';
    if (ok) csv << fmt(r.lambda) << ',' << fmt(r.f1) << ',' << fmt(r.f2) << ',' << fmt(r.m);
    else csv << ",,,";
    csv << ',' << r.status << '\n';
    rows.push_back({{"theta", r.theta},
                    {"R1", r.R1},
                    {"R2", r.R2},
                    {"lambda", ok ? finite_or_null(r.lambda) : Json(nullptr)},
                    {"f1", ok ? finite_or_null(r.f1) : Json(nullptr)},
                    {"f2", ok ? finite_or_null(r.f2) : Json(nullptr)},
                    {"m", ok ? finite_or_null(r.m) : Json(nullptr)},
                    {"status", r.status}});
  }
  report.result["records"] = rows;
  report.result["equal_index"] = summary.equal_index;
  report.result["min_index"] = summary.min_index;
  report.result["failures"] = summary.failures;
  csv << "# records=" << records.size() << ",failures=" << summary.failures
      << ",equal_index=" << summary.equal_index << ",min_index=" << summary.min_index
      << ",min_at_equal=" << (summary.min_at_equal ? "true" : "false") << '\n';
  const double lambda_equal = records[summary.equal_index].lambda;
  const double lambda_min = records[summary.min_index].lambda;
  report.residuals.push_back(
      {"min_at_equal_split", (lambda_equal - lambda_min) / lambda_min, 0.0, summary.min_at_equal});

  const auto opt = refine_optimal_split(P, settings, records, c.split_tol);
  report.result["optimal"] = {{"R1", opt.R1},
                              {"R2", opt.R2},
                              {"theta", opt.theta},
                              {"lambda", opt.lambda},
                              {"evaluations", opt.evaluations},
                              {"unimodal", opt.unimodal}};
  csv << "# optimal R1*=" << fmt(opt.R1) << ",R2*=" << fmt(opt.R2) << ",lambda=" << fmt(opt.lambda)
      << ",unimodal=" << (opt.unimodal ? "true" : "false") << '\n';
  report.residuals.push_back(at_most("optimal_radius_gap", std::abs(opt.R1 - opt.R2), 1e-4));
  report.csv = csv.str();
  return report;
}

RunReport cmd_verify(const RunConfig& c) {
  auto report = start_report(c);
  std::vector<std::string> selected;
  if (c.suite == "all") selected = suite_names();
  else selected.push_back(c.suite);
  Json details = Json::object();
  for (const auto& name : selected) run_suite(name, c, report.residuals, details);
  report.result["suites"] = selected;
  report.result["details"] = details;
  report.flags["verdict"] = report.all_pass() ? "PASS" : "FAIL";
  return report;
}

RunReport cmd_wirtinger(const RunConfig& c) {
  auto report = start_report(c);
  validate(c.p, c.q, 1);
  if (c.method != "direct") {
    report.result["lambda"] = wirtinger_lambda(c.p, c.q);
    // On (-1, 1) with q = p' the value is the area of the unit l^q disc.
    if (std::abs(c.q - conjugate_exponent(c.p)) <= 1e-14 * c.q) {
      const double area = 4.0 * std::pow(std::tgamma(1.0 + 1.0 / c.q), 2) / std::tgamma(1.0 + 2.0 / c.q);
      report.result["lq_disc_area"] = area;
      report.residuals.push_back(
          at_most("lq_disc_area", relative_gap(report.result["lambda"].get<double>(), area), 1e-8));
    }
  }
  if (c.method != "structured") {
    const auto direct = wirtinger_lambda_direct(c.p, c.q, std::max<std::size_t>(2 * c.grid, 64));
    report.result["direct_lambda"] = direct.lambda;
    report.result["direct_asymmetry"] = direct.asymmetry;
    report.result["direct_iterations"] = direct.iterations;
    if (c.method == "direct") {
      report.result["lambda"] = direct.lambda;
    } else {
      report.residuals.push_back(at_most(
          "oracle_gap", relative_gap(report.result["lambda"].get<double>(), direct.lambda), 1e-3));
    }
  }
  return report;
}

RunReport cmd_curve(const RunConfig& c) {
  auto report = start_report(c);
  validate(c.p, conjugate_exponent(c.p), 1);
  const double pc = conjugate_exponent(c.p);
  std::optional<ParametricCurve> curve;
  bool equality_case = false;
  double equality_tol = 0.0;
  if (c.shape == "circle") {
    curve = circle_curve(1.0, c.samples);
    equality_case = c.p == 2.0;
    equality_tol = 1e-5;
  } else if (c.shape == "ellipse") {
    curve = ellipse_curve(c.a, c.b, c.samples);
    equality_case = c.p == 2.0 && c.a == c.b;
    equality_tol = 1e-5;
  } else if (c.shape == "lr-ball") {
    curve = lr_ball_curve(pc, c.samples);
    equality_case = true;
    equality_tol = 1e-4;
  } else {
    curve = random_curve(c.seed, 0.15, 6, c.samples);
  }
  const double lambda = wirtinger_lambda(c.p, pc);
  const double L = curve_length_p(*curve, c.p);
  const double M = curve_area(*curve);
  const double defect = isoperimetric_defect(*curve, c.p, lambda);
  report.result["lambda"] = lambda;
  report.result["length"] = L;
  report.result["area"] = M;
  report.result["defect"] = defect;
  report.result["relative_defect"] = defect / (L * L);
  if (equality_case) {
    report.residuals.push_back(at_most("defect_equality", std::abs(defect), equality_tol));
  } else {
    // Strictly positive beyond the quadrature noise of the equality cases.
    report.residuals.push_back({"defect_positive", defect, 1e-5, defect > 1e-5});
  }
  return report;
}

namespace {

struct FlagSet {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::function<void(Json&)>> collectors;

  template <typename T>
  void add(const std::string& flag, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option("--" + flag, *holder, help);
    std::string key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    collectors.push_back([opt, holder, key](Json& j) {
      if (opt->count() > 0) j[key] = *holder;
    });
  }

  void add_switch(const std::string& flag, const std::string& help) {
    CLI::Option* opt = app->add_flag("--" + flag, help);
    std::string key = flag;
    collectors.push_back([opt, key](Json& j) {
      if (opt->count() > 0) j[key] = true;
    });
  }

  Json collect() const {
    Json j = Json::object();
    for (const auto& f : collectors) f(j);
    return j;
  }
};

using Command = RunReport (*)(const RunConfig&);

struct Subcommand {
  CLI::App* app;
  std::unique_ptr<FlagSet> flags;
  Command fn;
  bool table_output;  // CSV unless --out json
};

void add_common(FlagSet& f) {
  f.app->add_option("--config", f.config_path, "JSON config file (overrides TWISTED_EIG_CONFIG)");
  f.add<std::string>("out", "output format: json or csv");
  f.add<std::uint64_t>("seed", "seed for randomized checks");
  f.add<double>("ode-tol", "relative ODE tolerance");
  f.add<double>("zero-tol", "first-zero bracketing tolerance");
  f.add_switch("reproducible", "report timing_ms as 0");
}

void add_pq(FlagSet& f, bool with_dim) {
  f.add<double>("p", "gradient exponent p > 1");
  f.add<double>("q", "norm exponent q > 1");
  if (with_dim) f.add<int>("dim", "space dimension N");
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, "config file '" + path + "' is not valid JSON");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twisted Dirichlet eigenvalues on balls, two-ball unions and intervals",
               "twisted-eig"};
  app.require_subcommand(1);

  std::vector<Subcommand> subs;
  auto make = [&](const char* name, const char* help, Command fn, bool table) -> FlagSet& {
    auto flags = std::make_unique<FlagSet>();
    flags->app = app.add_subcommand(name, help);
    add_common(*flags);
    subs.push_back({flags->app, std::move(flags), fn, table});
    return *subs.back().flags;
  };

  {
    auto& f = make("ball", "first eigenvalue of a single ball", cmd_ball, false);
    add_pq(f, true);
    f.add<double>("radius", "ball radius");
    f.add<std::string>("method", "structured, direct or both");
    f.add<std::size_t>("grid", "cells of the direct minimizer");
  }
  {
    auto& f = make("twisted", "twisted eigenvalue of two disjoint balls", cmd_twisted, false);
    add_pq(f, true);
    f.add<double>("r1", "radius of the positive ball (0: equal split)");
    f.add<double>("r2", "radius of the negative ball (0: equal split)");
    f.add<double>("volume", "total volume used for the equal split (0: omega_N)");
    f.add<std::string>("method", "structured, direct or both");
    f.add<std::size_t>("grid", "cells per ball of the direct minimizer");
    f.add<double>("newton-tol", "Newton tolerance");
  }
  {
    auto& f = make("sweep", "volume-constrained sweep of two-ball splits", cmd_sweep, true);
    add_pq(f, true);
    f.add<std::size_t>("steps", "number of splits");
    f.add<double>("volume", "total volume (0: omega_N)");
    f.add<double>("min-fraction", "smallest volume fraction of the first ball");
    f.add<double>("split-tol", "golden-section tolerance on R1");
    f.add<double>("newton-tol", "Newton tolerance");
  }
  {
    auto& f = make("verify", "run verification suites", cmd_verify, false);
    add_pq(f, true);
    f.add<std::string>("suite", "scaling, monotonic, comparison, pohozaev, flux, divergence, "
                                "hadamard, rearrange or all");
    f.add<std::size_t>("cases", "random cases per randomized check");
    f.add<double>("radius", "ball radius");
    f.add<std::size_t>("steps", "number of splits");
    f.add<double>("volume", "total volume (0: omega_N)");
    f.add<double>("min-fraction", "smallest volume fraction of the first ball");
    f.add<double>("split-tol", "golden-section tolerance on R1");
    f.add<double>("newton-tol", "Newton tolerance");
  }
  {
    auto& f = make("wirtinger", "twisted eigenvalue of the interval (-1, 1)", cmd_wirtinger, false);
    add_pq(f, false);
    f.add<std::string>("method", "structured, direct or both");
    f.add<std::size_t>("grid", "half the cells of the direct minimizer");
  }
  {
    auto& f = make("curve", "isoperimetric defect L^2 - 4 lambda M of a closed curve", cmd_curve, false);
    f.add<double>("p", "length exponent p > 1");
    f.add<std::string>("shape", "circle, ellipse, lr-ball or random");
    f.add<double>("a", "ellipse semi-axis along x");
    f.add<double>("b", "ellipse semi-axis along y");
    f.add<std::size_t>("samples", "curve samples");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  if (chosen == nullptr) {
    err << "no subcommand given\n";
    return kUsage;
  }

  RunConfig config;
  RunReport report;
  try {
    std::string path = chosen->flags->config_path;
    if (path.empty()) {
      if (const char* env = std::getenv("TWISTED_EIG_CONFIG")) path = env;
    }
    if (!path.empty()) apply_json(config, load_config_file(path));
    apply_json(config, chosen->flags->collect());
    check_config(config);

    const auto t0 = std::chrono::steady_clock::now();
    report = chosen->fn(config);
    const auto t1 = std::chrono::steady_clock::now();
    report.timing_ms =
        config.reproducible ? 0.0 : std::chrono::duration<double, std::milli>(t1 - t0).count();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_usage_error() ? kUsage : kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }

  const bool csv = chosen->table_output ? config.out != "json" : config.out == "csv";
  if (csv) out << (report.csv.empty() ? flat_csv(report) : report.csv);
  else out << report.to_json().dump(2) << '\n';

  for (const auto& r : report.residuals) {
    if (!r.pass) {
      err << "verification failed: " << r.name << " = " << fmt(r.value) << " (tolerance "
          << fmt(r.tolerance) << ")\n";
    }
  }
  return report.all_pass() ? kOk : kVerificationFailure;
}

}  // namespace twisted::cli
