#pragma once

#include <cstddef>

#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/shooting.hpp"

namespace twisted {

struct BallOptions {
  ShootOptions shoot;
  std::size_t profile_nodes = 4097;
  double initial_value = 1.0;  // amplitude of the base shot; lambda does not depend on it
};

/// First Dirichlet eigenpair of the quotient ||grad u||_p / ||u||_q on B_R
/// (no sign constraint), with the eigenfunction normalized to ||u||_q = 1.
struct BallEigenResult {
  double lambda = 0.0;
  double radius = 0.0;
  RadialProfile profile;
  double flux = 0.0;     // |u'(R)| of the normalized profile
  double euler_k = 0.0;  // k in -Delta_p u = k u^{q-1}; equals lambda^p when ||u||_q = 1
  double energy_residual = 0.0;  // |I_grad - I_q| / I_q of the base shot
  ShotResult shot;  // the normalized eigenfunction as a shot (A psi(B r))
};

/// One base shot (k = 1, m = 0), then the exact scaling family: with
/// B = rho / R, lambda = (B^{p-N} N w_N I_grad)^{1/p} / (B^{-N} N w_N I_q)^{1/q}.
BallEigenResult ball_lambda(const ProblemParams& params, double radius,
                            const BallOptions& options = {});

struct DirectOptions {
  std::size_t cells = 512;
  std::size_t max_iterations = 20000;
  double tolerance = 1e-12;  // relative decrease of log(lambda) treated as stalled
};

struct BallDirectResult {
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Brute-force oracle: minimizes the P1-discretized quotient over nonnegative
/// radial grid functions vanishing at R, by preconditioned projected descent
/// from u0 = 1 - (r/R)^2. Throws NonConvergence if the descent stalls.
BallDirectResult ball_lambda_direct(const ProblemParams& params, double radius,
                                    const DirectOptions& options = {});

/// |lambda(B_{tR}) - t^sigma lambda(B_R)| / lambda(B_{tR}), computing the two
/// balls from independent shots (different initial amplitudes).
double scaling_check(const ProblemParams& params, double radius, double t,
                     const BallOptions& options = {});

/// Max over interior nodes of the Euler-equation residual
///   | (r^{N-1}|u'|^{p-2}u')' + r^{N-1} g(u) |  /  max r^{N-1} |g(u)|
/// with the momentum differentiated numerically on the profile grid.
/// Nodes within `boundary_layer * R` of the origin or of the boundary are
/// skipped. The momentum is not smooth at either end (u - u(0) ~ r^{p/(p-1)}
/// at the origin, g(u) ~ (R - r)^{q-1} at the boundary), which spoils any
/// fixed-order difference stencil there.
double euler_profile_residual(const RadialProfile& profile, const ProblemParams& params,
                              const SourceTerm& source, double boundary_layer = 0.01);

}  // namespace twisted
