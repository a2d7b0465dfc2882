#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "twisted/ball_eigen.hpp"
#include "twisted/cli.hpp"
#include "twisted/errors.hpp"
#include "twisted/params.hpp"
#include "twisted/rearrange.hpp"
#include "twisted/shape_verify.hpp"
#include "twisted/twisted_eigen.hpp"

namespace twisted::cli {

namespace {

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

ProblemParams params_of(const RunConfig& c) { return validate(c.p, c.q, c.dim); }

BallOptions ball_options(const RunConfig& c) {
  BallOptions o;
  o.shoot = c.shoot_options();
  return o;
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

TwistedResult equal_split(const RunConfig& c, const ProblemParams& P) {
  const auto s = sweep_settings(c);
  const auto [R1, R2] = split_radii(P, resolve_volume(P, s.total_volume), 0.5);
  TwistedConfig cfg{P, R1, R2};
  cfg.tol = c.newton_tol;
  cfg.shoot = s.shoot;
  return twisted_structured(cfg);
}

void scaling_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  for (double t : {0.5, 2.0}) {
    const double gap = scaling_check(P, c.radius, t, ball_options(c));
    d["t=" + label(t)] = gap;
    out.push_back(at_most("scaling.t_" + label(t), gap, 1e-8));
  }
}

void monotonic_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  Json rows = Json::array();
  double worst = -std::numeric_limits<double>::infinity();
  double previous = 0.0;
  bool first = true;
  for (double f : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    const double lambda = ball_lambda(P, f * c.radius, ball_options(c)).lambda;
    rows.push_back({{"radius", f * c.radius}, {"lambda", lambda}});
    if (!first) worst = std::max(worst, (lambda - previous) / previous);
    previous = lambda;
    first = false;
  }
  d["balls"] = rows;
  // Nested balls: a strictly larger ball must have a strictly smaller value.
  out.push_back({"monotonic.max_relative_increase", worst, 0.0, worst < 0.0});
}

void comparison_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> start(0.2, 2.0);
  std::uniform_real_distribution<double> ratio(1.01, 2.0);
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  Json failing = Json::array();
  for (std::size_t i = 0; i < c.cases; ++i) {
    const double c1 = start(rng);
    const double c2 = c1 * ratio(rng);
    // R beyond both first zeros: the check runs over the whole common positivity range.
    const auto rep = check_comparison(P, c1, c2, 1e6, 1e-9, 4001, c.shoot_options());
    worst = std::max(worst, rep.max_difference);
    if (!rep.pass) {
      ++failures;
      if (failing.size() < 5) {
        failing.push_back({{"c1", rep.c1}, {"c2", rep.c2}, {"max_difference", rep.max_difference},
                           {"argmax", rep.argmax}, {"domain_end", rep.domain_end}});
      }
    }
  }
  d["cases"] = c.cases;
  d["failures"] = failures;
  d["first_failures"] = failing;
  out.push_back(at_most("comparison.max_difference", worst, 1e-9));
}

void pohozaev_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  const auto ball = ball_lambda(P, c.radius, ball_options(c));
  const auto rep = pohozaev_residual(ball.profile, P, SourceTerm{ball.euler_k, 0.0});
  d["boundary_term"] = rep.boundary_term;
  d["interior_term"] = rep.interior_term;
  out.push_back(at_most("pohozaev.ball", rep.residual, 1e-6));
  const double coefficient = pohozaev_flux_free_coefficient(P);
  d["flux_free_coefficient"] = coefficient;
  out.push_back({"pohozaev.flux_free_coefficient", coefficient, 0.0, coefficient < 0.0});
}

void flux_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  const auto eq = equal_split(c, P);
  out.push_back(at_most("flux.equal_split", check_flux_equality(eq), 1e-8));

  const auto s = sweep_settings(c);
  const auto opt = find_optimal_split(P, s, c.split_tol);
  TwistedConfig cfg{P, opt.R1, opt.R2};
  cfg.tol = c.newton_tol;
  cfg.shoot = s.shoot;
  const auto at_opt = twisted_structured(cfg);
  d["optimal_R1"] = opt.R1;
  d["optimal_R2"] = opt.R2;
  d["optimal_lambda"] = opt.lambda;
  d["unimodal"] = opt.unimodal;
  out.push_back(at_most("flux.optimal_split", check_flux_equality(at_opt), 1e-4));
  out.push_back(at_most("flux.optimal_radius_gap", std::abs(opt.R1 - opt.R2), 1e-4));
}

void divergence_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  const auto eq = equal_split(c, P);
  const auto rep = check_divergence_identity(eq, P);
  d["m"] = eq.m;
  d["flux_term1"] = rep.flux_term1;
  d["flux_term2"] = rep.flux_term2;
  d["source_term1"] = rep.source_term1;
  d["source_term2"] = rep.source_term2;
  out.push_back(at_most("divergence.flux_terms", rep.residual, 1e-6));
  out.push_back(at_most("divergence.flux_vs_source", rep.cross_residual, 1e-6));
}

void hadamard_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  const auto P = params_of(c);
  const auto s = sweep_settings(c);
  const double V = resolve_volume(P, s.total_volume);
  Json rows = Json::array();
  for (double theta : {0.42, 0.45, 0.47}) {
    const auto [R1, R2] = split_radii(P, V, theta);
    const auto rep = hadamard_derivative(P, R1, R2, 0.0, s);
    rows.push_back({{"theta", theta},
                    {"R1", R1},
                    {"R2", R2},
                    {"predicted", rep.predicted},
                    {"finite_difference", rep.finite_difference}});
    out.push_back(at_most("hadamard.theta_" + label(theta), rep.relative_gap,
                          1e-3));
  }
  const auto [R1, R2] = split_radii(P, V, 0.5);
  const auto rep = hadamard_derivative(P, R1, R2, 0.0, s);
  rows.push_back({{"theta", 0.5},
                  {"R1", R1},
                  {"R2", R2},
                  {"predicted", rep.predicted},
                  {"finite_difference", rep.finite_difference}});
  d["points"] = rows;
  out.push_back(at_most("hadamard.equal_predicted", std::abs(rep.predicted), 1e-6));
  out.push_back(at_most("hadamard.equal_finite_difference", std::abs(rep.finite_difference), 1e-6));
}

void rearrange_suite(const RunConfig& c, std::vector<Residual>& out, Json& d) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double equi = 0.0;
  for (std::size_t i = 0; i < c.cases; ++i) {
    SampledFunction f;
    const std::size_t n = 16 + static_cast<std::size_t>(unit(rng) * 240.0);
    for (std::size_t j = 0; j < n; ++j) {
      // Coarse values so that ties occur.
      f.values.push_back(std::floor(unit(rng) * 32.0) / 8.0);
      f.weights.push_back(0.1 + unit(rng));
    }
    for (double a : {1.0, c.q - 1.0, c.q}) {
      double scale = 0.0;
      for (std::size_t j = 0; j < n; ++j) scale += f.weights[j] * std::pow(f.values[j], a);
      if (scale > 0.0) equi = std::max(equi, check_equimeasurable(f, a) / scale);
    }
  }
  out.push_back(at_most("rearrange.equimeasurable", equi, 1e-14));

  std::size_t violations = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    for (std::size_t i = 0; i < c.cases; ++i) {
      if (!polya_szego_check_1d(random_piecewise_linear(rng), p).holds) ++violations;
    }
  }
  d["polya_szego_functions"] = 3 * c.cases;
  out.push_back(at_most("rearrange.polya_szego_violations", static_cast<double>(violations), 0.0));

  const auto P1 = validate(c.p, c.q, 1);
  double increase = -std::numeric_limits<double>::infinity();
  double moment = 0.0;
  std::size_t demos = 0;
  while (demos < c.cases) {
    std::vector<PiecewiseLinear> parts{random_piecewise_linear(rng, 12, true),
                                       random_piecewise_linear(rng, 12, true)};
    ReductionReport rep;
    try {
      rep = two_ball_reduction_demo(parts, P1);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoSignChange) continue;
      throw;
    }
    ++demos;
    increase = std::max(increase, (rep.quotient_after - rep.quotient_before) / rep.quotient_before);
    const double scale = pl_power_integral(parts[0], c.q) + pl_power_integral(parts[1], c.q);
    moment = std::max(moment, std::abs(rep.moment_after - rep.moment_before) / scale);
  }
  d["reduction_demos"] = demos;
  out.push_back(at_most("rearrange.reduction_quotient_increase", increase, 1e-12));
  out.push_back(at_most("rearrange.reduction_moment_change", moment, 1e-12));
}

using Suite = void (*)(const RunConfig&, std::vector<Residual>&, Json&);

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> table = {
      {"scaling", scaling_suite},       {"monotonic", monotonic_suite},
      {"comparison", comparison_suite}, {"pohozaev", pohozaev_suite},
      {"flux", flux_suite},             {"divergence", divergence_suite},
      {"hadamard", hadamard_suite},     {"rearrange", rearrange_suite},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suites()) n.push_back(name);
    return n;
  }();
  return names;
}

void run_suite(const std::string& name, const RunConfig& config, std::vector<Residual>& out,
               Json& details) {
  for (const auto& [n, fn] : suites()) {
    if (n == name) {
      Json d = Json::object();
      fn(config, out, d);
      details[name] = d;
      return;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
}

}  // namespace twisted::cli
