#include "twisted/shape_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "twisted/errors.hpp"

namespace twisted {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_shape_dim(const ProblemParams& params) {
  if (params.dim() < 2) {
    throw Error(ErrorKind::InvalidArgument, "two-ball shape analysis needs dim >= 2");
  }
}

TwistedConfig make_config(const ProblemParams& params, double R1, double R2,
                          const SweepSettings& s) {
  TwistedConfig cfg{params, R1, R2};
  cfg.tol = s.tol;
  cfg.shoot = s.shoot;
  cfg.profile_nodes = s.profile_nodes;
  return cfg;
}

std::vector<double> fractions(const SweepSettings& s) {
  if (s.steps < 8) throw Error(ErrorKind::InvalidArgument, "a sweep needs at least 8 steps");
  if (!(s.min_fraction > 0.0 && s.min_fraction < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "min_fraction must lie in (0, 1/2)");
  }
  std::vector<double> theta(s.steps);
  const double span = 1.0 - 2.0 * s.min_fraction;
  for (std::size_t j = 0; j < s.steps; ++j) {
    theta[j] = s.min_fraction + span * static_cast<double>(j) / static_cast<double>(s.steps - 1);
  }
  // Exact mirror pairs and an exact midpoint.
  for (std::size_t j = 0; j < s.steps / 2; ++j) theta[s.steps - 1 - j] = 1.0 - theta[j];
  if (s.steps % 2 == 1) theta[s.steps / 2] = 0.5;
  return theta;
}

struct Evaluation {
  std::optional<TwistedResult> result;
  std::string status;
};

Evaluation evaluate(const TwistedConfig& cfg, const std::optional<TwistedSeed>& seed) {
  try {
    return {seed ? twisted_structured(cfg, *seed) : twisted_structured(cfg), "ok"};
  } catch (const Error& e) {
    return {std::nullopt, std::string(to_string(e.kind()))};
  }
}

SweepRecord to_record(double theta, const TwistedConfig& cfg, const Evaluation& ev) {
  SweepRecord rec;
  rec.theta = theta;
  rec.R1 = cfg.R1;
  rec.R2 = cfg.R2;
  rec.status = ev.status;
  if (ev.result) {
    rec.lambda = ev.result->lambda;
    rec.f1 = ev.result->f1;
    rec.f2 = ev.result->f2;
    rec.m = ev.result->m;
  } else {
    rec.lambda = rec.f1 = rec.f2 = rec.m = kNaN;
  }
  return rec;
}

}  // namespace

double resolve_volume(const ProblemParams& params, double total_volume) {
  if (total_volume == 0.0) return unit_ball_measure(params.dim());
  if (!(total_volume > 0.0) || !std::isfinite(total_volume)) {
    throw Error(ErrorKind::InvalidArgument, "total volume must be positive");
  }
  return total_volume;
}

std::pair<double, double> split_radii(const ProblemParams& params, double total_volume,
                                      double theta) {
  if (!(theta > 0.0 && theta < 1.0) || !(total_volume > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "split needs 0 < theta < 1 and a positive volume");
  }
  const double w = unit_ball_measure(params.dim());
  const double inv = 1.0 / params.dim();
  return {std::pow(theta * total_volume / w, inv), std::pow((1.0 - theta) * total_volume / w, inv)};
}

std::vector<SweepRecord> sweep_volume(const ProblemParams& params, const SweepSettings& settings) {
  require_shape_dim(params);
  const double V = resolve_volume(params, settings.total_volume);
  const auto theta = fractions(settings);
  const std::size_t n = theta.size();
  std::vector<SweepRecord> records(n);

  // Walk outward from the middle in both directions.
  const std::size_t lo_start = (n - 1) / 2;
  const std::size_t hi_start = n / 2;
  auto walk = [&](std::size_t start, bool upward) {
    std::optional<TwistedSeed> seed;
    for (std::size_t j = start;; upward ? ++j : --j) {
      const auto [R1, R2] = split_radii(params, V, theta[j]);
      const auto cfg = make_config(params, R1, R2, settings);
      const auto ev = evaluate(cfg, seed);
      records[j] = to_record(theta[j], cfg, ev);
      if (ev.result) seed = ev.result->seed;
      if (upward ? j + 1 == n : j == 0) break;
    }
  };
  walk(lo_start, false);
  walk(hi_start, true);
  return records;
}

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records) {
  SweepSummary s;
  if (records.empty()) return s;
  double best_gap = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < records.size(); ++j) {
    const auto& r = records[j];
    const double gap = std::abs(r.theta - 0.5);
    if (gap < best_gap) {
      best_gap = gap;
      s.equal_index = j;
    }
    if (r.status != "ok" || !std::isfinite(r.lambda)) {
      ++s.failures;
      continue;
    }
    if (r.lambda < best) {
      best = r.lambda;
      s.min_index = j;
    }
  }
  const auto& eq = records[s.equal_index];
  s.min_at_equal = eq.status == "ok" && eq.lambda <= best;
  return s;
}

OptimalSplit find_optimal_split(const ProblemParams& params, const SweepSettings& settings,
                                double tol) {
  return refine_optimal_split(params, settings, sweep_volume(params, settings), tol);
}

OptimalSplit refine_optimal_split(const ProblemParams& params, const SweepSettings& settings,
                                  const std::vector<SweepRecord>& records, double tol) {
  require_shape_dim(params);
  if (records.empty()) throw Error(ErrorKind::InvalidArgument, "no sweep records to refine");
  const double V = resolve_volume(params, settings.total_volume);
  const auto summary = summarize_sweep(records);
  OptimalSplit out;
  out.evaluations = records.size();
  const std::size_t j = summary.min_index;
  const auto& best = records[j];
  if (best.status != "ok") throw Error(ErrorKind::NonConvergence, "no converged sweep record");

  // Unimodality of the converged records on the coarse grid.
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = records[i + 1];
    if (a.status != "ok" || b.status != "ok") continue;
    if (i + 1 <= j && b.lambda > a.lambda) out.unimodal = false;
    if (i >= j && b.lambda < a.lambda) out.unimodal = false;
  }
  out.theta = best.theta;
  out.R1 = best.R1;
  out.R2 = best.R2;
  out.lambda = best.lambda;
  if (!out.unimodal || j == 0 || j + 1 == records.size()) return out;

  double a = records[j - 1].theta;
  double b = records[j + 1].theta;
  std::optional<TwistedSeed> seed;
  auto lambda_at = [&](double theta) {
    const auto [R1, R2] = split_radii(params, V, theta);
    auto cfg = make_config(params, R1, R2, settings);
    cfg.profile_nodes = 16;
    auto ev = evaluate(cfg, seed);
    ++out.evaluations;
    if (!ev.result) throw Error(ErrorKind::NonConvergence, "golden-section solve failed");
    seed = ev.result->seed;
    return ev.result->lambda;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = lambda_at(c);
  double fd = lambda_at(d);
  auto r1_width = [&] {
    return std::abs(split_radii(params, V, b).first - split_radii(params, V, a).first);
  };
  while (r1_width() > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = lambda_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = lambda_at(d);
    }
  }
  out.theta = 0.5 * (a + b);
  std::tie(out.R1, out.R2) = split_radii(params, V, out.theta);
  out.lambda = lambda_at(out.theta);
  return out;
}

double check_flux_equality(const TwistedResult& result) {
  const double top = std::max(result.f1, result.f2);
  return top > 0.0 ? std::abs(result.f1 - result.f2) / top : 0.0;
}

DivergenceReport check_divergence_identity(const TwistedResult& result,
                                           const ProblemParams& params, double m_tol) {
  if (std::abs(result.m) > m_tol) {
    throw Error(ErrorKind::IdentityInapplicable,
                "the flux identity needs the zero-multiplier equation, |m| = " +
                    std::to_string(std::abs(result.m)));
  }
  const double p = params.p();
  const int dim = params.dim();
  DivergenceReport rep;
  rep.flux_term1 = std::pow(result.f1, p - 1.0) * sphere_area(dim, result.R1);
  rep.flux_term2 = std::pow(result.f2, p - 1.0) * sphere_area(dim, result.R2);
  rep.source_term1 = result.k * result.moment1;
  rep.source_term2 = result.k * result.moment2;
  rep.residual = std::abs(rep.flux_term1 - rep.flux_term2) /
                 std::max(rep.flux_term1, rep.flux_term2);
  rep.cross_residual = std::max(std::abs(rep.flux_term1 - rep.source_term1) / rep.flux_term1,
                                std::abs(rep.flux_term2 - rep.source_term2) / rep.flux_term2);
  return rep;
}

PohozaevReport pohozaev_residual(const RadialProfile& profile, const ProblemParams& params,
                                 const SourceTerm& source) {
  const double p = params.p();
  const double q = params.q();
  const int dim = params.dim();
  const double R = profile.grid().radius();
  const auto u = profile.values();
  const auto du = profile.slopes();
  std::vector<double> grad(u.size()), prim(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    grad[i] = std::pow(std::abs(du[i]), p);
    prim[i] = source.primitive(u[i], q);
  }
  const double grad_int = integrate_radial(profile.grid(), grad, dim - 1);
  const double prim_int = integrate_radial(profile.grid(), prim, dim - 1);
  PohozaevReport rep;
  const double f = std::abs(du.back());
  rep.boundary_term = -((p - 1.0) / p) * R * sphere_area(dim, R) * std::pow(f, p);
  const double a = ((dim - p) / p) * grad_int;
  const double b = dim * prim_int;
  rep.interior_term = a - b;
  const double scale = std::max({std::abs(rep.boundary_term), std::abs(a), std::abs(b)});
  rep.residual = scale > 0.0 ? std::abs(rep.boundary_term - rep.interior_term) / scale : 0.0;
  return rep;
}

double pohozaev_flux_free_coefficient(const ProblemParams& params) {
  return (params.dim() - params.p()) / params.p() - params.dim() / params.q();
}

HadamardReport hadamard_derivative(const ProblemParams& params, double R1, double R2, double h,
                                   const SweepSettings& settings) {
  require_shape_dim(params);
  const int dim = params.dim();
  const double p = params.p();
  if (h == 0.0) h = 1e-3 * R1;
  if (!(h > 0.0) || !(h < R1)) throw Error(ErrorKind::InvalidArgument, "step must lie in (0, R1)");
  const double Rn_total = std::pow(R1, dim) + std::pow(R2, dim);

  const auto center = twisted_structured(make_config(params, R1, R2, settings));
  auto lambda_at = [&](double t) {
    const double r1 = R1 + t;
    const double r2 = std::pow(Rn_total - std::pow(r1, dim), 1.0 / dim);
    auto cfg = make_config(params, r1, r2, settings);
    cfg.profile_nodes = 16;
    return twisted_structured(cfg, center.seed).lambda;
  };
  auto central = [&](double step) { return (lambda_at(step) - lambda_at(-step)) / (2.0 * step); };

  HadamardReport rep;
  rep.R1 = R1;
  rep.R2 = R2;
  rep.lambda = center.lambda;
  const double area1 = sphere_area(dim, R1);
  const double area2 = sphere_area(dim, R2);
  const double s2 = -area1 / area2;
  rep.predicted = -((p - 1.0) / p) * std::pow(center.lambda, 1.0 - p) *
                  (std::pow(center.f1, p) * area1 + std::pow(center.f2, p) * area2 * s2);
  rep.finite_difference = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  const double scale = std::max(std::abs(rep.predicted), std::abs(rep.finite_difference));
  rep.relative_gap = scale > 0.0 ? std::abs(rep.predicted - rep.finite_difference) / scale : 0.0;
  return rep;
}

}  // namespace twisted
