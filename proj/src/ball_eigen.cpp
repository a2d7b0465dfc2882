#include "twisted/ball_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "twisted/direct.hpp"
#include "twisted/errors.hpp"

namespace twisted {

namespace {

// Far enough for every admissible base shot with c = O(1) and k = 1.
constexpr double kBaseShotReach = 1e4;

// Fourth-order central differences inside, second-order at the two ends.
std::vector<double> derivative4(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> d = finite_difference(x, f);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double h = 0.5 * (x[i + 1] - x[i - 1]);
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  }
  return d;
}

}  // namespace

BallEigenResult ball_lambda(const ProblemParams& params, double radius,
                            const BallOptions& options) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
  }
  const double p = params.p();
  const double q = params.q();
  const int dim = params.dim();
  const ShotResult base =
      shoot(params, SourceTerm{1.0, 0.0}, options.initial_value, kBaseShotReach, options.shoot);
  const auto& I = base.integrals();
  const double B = base.first_zero() / radius;
  const double nw = dim * unit_ball_measure(dim);
  const double energy = std::pow(B, p - dim) * nw * I.grad;
  const double mass = std::pow(B, -dim) * nw * I.q;
  const double lambda = std::pow(energy, 1.0 / p) / std::pow(mass, 1.0 / q);

  const double A = std::pow(mass, -1.0 / q);
  ShotResult normalized = rescale_shot(base, params, A, B);
  auto profile = normalized.profile(options.profile_nodes);
  const double flux = std::abs(normalized.boundary_slope());
  const double k = normalized.source().k;
  return BallEigenResult{lambda,
                         radius,
                         std::move(profile),
                         flux,
                         k,
                         std::abs(I.grad - I.q) / I.q,
                         std::move(normalized)};
}

BallDirectResult ball_lambda_direct(const ProblemParams& params, double radius,
                                    const DirectOptions& options) {
  if (options.cells < 64) throw Error(ErrorKind::InvalidArgument, "direct grid needs >= 64 cells");
  direct::Problem problem;
  problem.p = params.p();
  problem.q = params.q();
  problem.pieces.push_back(direct::radial_piece(radius, options.cells, params.dim(), +1));
  std::vector<double> u0(problem.pieces[0].nodes.size());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    const double s = problem.pieces[0].nodes[i] / radius;
    u0[i] = 1.0 - s * s;
  }
  direct::Options dopt;
  dopt.max_iterations = options.max_iterations;
  dopt.stall_tolerance = options.tolerance;
  auto sol = direct::minimize(problem, {std::move(u0)}, dopt);
  if (!sol.converged) {
    throw Error(ErrorKind::NonConvergence, "direct ball minimization did not converge");
  }
  return {sol.lambda, sol.iterations, sol.converged};
}

double scaling_check(const ProblemParams& params, double radius, double t,
                     const BallOptions& options) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "scaling factor must be positive");
  const double base = ball_lambda(params, radius, options).lambda;
  BallOptions other = options;
  other.initial_value = 2.0 * options.initial_value;
  const double scaled = ball_lambda(params, t * radius, other).lambda;
  return std::abs(scaled - std::pow(t, scaling_exponent(params)) * base) / scaled;
}

double euler_profile_residual(const RadialProfile& profile, const ProblemParams& params,
                              const SourceTerm& source, double boundary_layer) {
  const double p = params.p();
  const double q = params.q();
  const int dim = params.dim();
  const auto r = profile.grid().nodes();
  const auto u = profile.values();
  const auto du = profile.slopes();
  const std::size_t n = u.size();
  std::vector<double> w(n), forcing(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rn1 = dim == 1 ? 1.0 : std::pow(r[i], dim - 1);
    w[i] = rn1 * std::pow(std::abs(du[i]), p - 2.0) * du[i];
    forcing[i] = u[i] > 0.0 ? rn1 * source(u[i], q) : 0.0;
  }
  const auto dw = derivative4(r, w);
  double scale = 0.0, worst = 0.0;
  const double r_start = boundary_layer * profile.grid().radius();
  const double r_stop = (1.0 - boundary_layer) * profile.grid().radius();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    scale = std::max(scale, std::abs(forcing[i]));
    if (r[i] < r_start || r[i] > r_stop) continue;
    worst = std::max(worst, std::abs(dw[i] + forcing[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace twisted
