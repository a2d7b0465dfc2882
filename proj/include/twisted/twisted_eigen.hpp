#pragma once

#include <cstddef>
#include <string>

#include "twisted/ball_eigen.hpp"
#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/shooting.hpp"

namespace twisted {

/// Two disjoint balls B_{R1} (positive piece) and B_{R2} (negative piece).
struct TwistedConfig {
  ProblemParams params;
  double R1 = 1.0;
  double R2 = 1.0;
  double tol = 1e-10;  // Newton tolerance on the scaled residual
  ShootOptions shoot{};
  std::size_t profile_nodes = 4097;
  int homotopy_steps = 10;
  std::size_t max_newton_iterations = 60;
};

/// Raw unknowns of the shooting system, with the positive piece pinned at
/// phi_1(0) = 1: sources (k, m) on B_{R1} and (k, -m) on B_{R2}, and phi_2(0) = c2.
struct TwistedSeed {
  double k = 1.0;
  double m = 0.0;
  double c2 = 1.0;
};

/// The eigenpair u = u1 chi_1 - u2 chi_2 normalized to ||u||_q = 1, solving
///   -Delta_p u = k |u|^{q-2} u + m (q-1) |u|^{q-2},   k = lambda^p.
struct TwistedResult {
  double R1 = 0.0;
  double R2 = 0.0;
  double lambda = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double m = 0.0;
  double k = 0.0;
  RadialProfile profile1;
  RadialProfile profile2;
  double f1 = 0.0;
  double f2 = 0.0;
  double moment1 = 0.0;           // int_{B1} u1^{q-1} dx
  double moment2 = 0.0;           // int_{B2} u2^{q-1} dx
  double moment_residual = 0.0;   // |moment1 - moment2| / moment1
  double euler_residual = 0.0;    // residual of the equation with m forced to 0
  double model_residual = 0.0;    // residual of the equation with the measured m
  std::size_t iterations = 0;
  std::string method;
  TwistedSeed seed;  // raw solution; feeds continuation in sweeps
};

/// Damped Newton on (log k, m/k, log c2) for
///   rho_1 = R1,  rho_2 = R2,  int phi_1^{q-1} = int phi_2^{q-1},
/// with a forward-difference Jacobian. Without a seed, starts from the exact
/// antisymmetric solution on two equal balls of the same total volume and
/// follows a homotopy to (R1, R2).
///
/// For q < 2 the multiplier term is singular, so only m = 0 is tried; the
/// moment constraint then fails for unequal radii and MultiplierUnsupported
/// is raised. Throws NewtonDivergence with the last residual otherwise.
TwistedResult twisted_structured(const TwistedConfig& config);
TwistedResult twisted_structured(const TwistedConfig& config, const TwistedSeed& seed);

/// Brute-force oracle: discrete constrained minimization over (v1 >= 0 on
/// B_{R1}, v2 >= 0 on B_{R2}) with the signed moment restored after every
/// step. Makes no assumption on the multiplier; m is measured from the
/// discrete stationarity condition. Throws NonConvergence.
TwistedResult twisted_direct(const TwistedConfig& config, const DirectOptions& options = {});

struct MultiplierReport {
  double m = 0.0;
  double euler_residual = 0.0;
  double multiplier_tolerance = 0.0;
  double residual_tolerance = 0.0;
  bool pass = false;  // false means FLAG: the zero-multiplier equation is not satisfied
};

MultiplierReport multiplier_report(const TwistedResult& result,
                                   double multiplier_tolerance = 1e-8,
                                   double residual_tolerance = 1e-6);

}  // namespace twisted
