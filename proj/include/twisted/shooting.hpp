#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "twisted/ode.hpp"
#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"

namespace twisted {

/// Right-hand side g(phi) = k |phi|^{q-2} phi + m (q-1) |phi|^{q-2} of the
/// radial problem  -(r^{N-1} |phi'|^{p-2} phi')' = r^{N-1} g(phi).
///
/// `k` plays the role of the eigenvalue constant lambda^p ||u||_q^{p-q},
/// `m` the Lagrange multiplier of the signed-moment constraint.
struct SourceTerm {
  double k = 1.0;
  double m = 0.0;

  double operator()(double phi, double q) const noexcept;
  /// G(u) = int_0^u g = k |u|^q / q + m |u|^{q-2} u.
  double primitive(double u, double q) const noexcept;
};

struct ShootOptions {
  ode::Tolerances tolerances{1e-12, 1e-14};
  double zero_tol = 1e-13;          // absolute tolerance on the first zero
  double startup_fraction = 1e-6;   // eps = fraction * intrinsic length scale
  std::size_t max_steps = 500000;
};

/// Weighted integrals over [0, rho] (no angular factor):
/// q = int phi^q r^{N-1}, q_minus_1 = int phi^{q-1} r^{N-1},
/// q_minus_2 = int phi^{q-2} r^{N-1} (only tracked for q >= 2, else 0),
/// grad = int |phi'|^p r^{N-1}.
struct ShotIntegrals {
  double q = 0.0;
  double q_minus_1 = 0.0;
  double q_minus_2 = 0.0;
  double grad = 0.0;
};

struct TrajectoryPoint {
  double r;
  double phi;
  double momentum;  // w = r^{N-1} |phi'|^{p-2} phi'
};

namespace detail {
struct Trajectory;
}

/// One solution of the radial Cauchy problem phi(0) = c, phi'(0) = 0, up to
/// its first zero. Holds a dense representation of the trajectory, possibly
/// viewed through the two-parameter family u(r) = A phi(B r).
class ShotResult {
 public:
  double initial_value() const noexcept;
  const SourceTerm& source() const noexcept { return source_; }
  double first_zero() const noexcept;
  double boundary_slope() const noexcept;
  const ShotIntegrals& integrals() const noexcept { return integrals_; }
  int dim() const noexcept;
  double p() const noexcept;
  double q() const noexcept;
  std::size_t accepted_steps() const noexcept;

  double phi(double r) const;
  double slope(double r) const;
  double momentum(double r) const;

  /// Points at accepted integrator steps, ending at the first zero.
  std::vector<TrajectoryPoint> trajectory() const;

  /// Uniform sampling of [0, first_zero] with exact slopes attached.
  RadialProfile profile(std::size_t node_count) const;

  friend ShotResult shoot(const ProblemParams&, const SourceTerm&, double, double,
                          const ShootOptions&);
  friend ShotResult rescale_shot(const ShotResult&, const ProblemParams&, double, double);

 private:
  std::shared_ptr<const detail::Trajectory> base_;
  SourceTerm source_;
  ShotIntegrals integrals_;
  double amplitude_ = 1.0;  // A
  double dilation_ = 1.0;   // B
};

/// Integrates in momentum form (phi, w) from r = eps, started from the
/// series phi ~ c - sgn(g) (|g(c)|/N)^{1/(p-1)} ((p-1)/p) r^{p/(p-1)},
/// with Dormand-Prince 5(4) and stops at the first zero (located by root
/// finding on the step polynomial to `options.zero_tol`).
///
/// Throws NonPositiveInitial (c <= 0), SingularSource (m != 0 with q < 2)
/// or NoZeroFound (phi stays positive up to r_max).
ShotResult shoot(const ProblemParams& params, const SourceTerm& source, double c, double r_max,
                 const ShootOptions& options = {});

/// u(r) = A phi(B r). For an m = 0 source this solves the same equation with
/// k -> A^{p-q} B^p k; the first zero moves to rho / B, the slope scales by
/// A B, and the integrals by A^q B^{-N}, A^{q-1} B^{-N}, A^p B^{p-N}.
/// Throws RescaleWithMultiplier if the source has m != 0.
ShotResult rescale_shot(const ShotResult& shot, const ProblemParams& params, double A, double B);

struct ComparisonReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double first_zero_1 = 0.0;
  double first_zero_2 = 0.0;
  double domain_end = 0.0;      // min(R, first zeros)
  double max_difference = 0.0;  // max of phi_1 - phi_2 over [0, domain_end]
  double argmax = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Ordering check for the unit-source Cauchy problem: c1 < c2 should give
/// phi_1 <= phi_2 wherever both are positive solutions on [0, R].
ComparisonReport check_comparison(const ProblemParams& params, double c1, double c2, double R,
                                  double tolerance = 1e-9, std::size_t samples = 4001,
                                  const ShootOptions& options = {});

}  // namespace twisted
