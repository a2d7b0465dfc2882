#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "twisted/params.hpp"

namespace twisted {

enum class DomainTag { Interval, Ball, TwoBalls };

/// Cell values with cell measures. Weights must be positive; they sum to the
/// measure of the domain.
struct SampledFunction {
  std::vector<double> values;
  std::vector<double> weights;
  DomainTag domain = DomainTag::Interval;
};

/// Values sorted non-increasing (stable), weights carried along. Throws
/// NegativeValues for negative entries and InvalidArgument for malformed input.
SampledFunction decreasing_rearrangement(const SampledFunction& f);

/// For a rearranged ball function: outer radius of the annulus occupied by
/// each cell, so that cell i fills omega_N (r_i^N - r_{i-1}^N) = weight_i.
std::vector<double> annulus_radii(const SampledFunction& rearranged, int dim);

/// |sum w psi(f) - sum w* psi(f*)| for psi(s) = s^power, with compensated sums.
double check_equimeasurable(const SampledFunction& f, double power);

/// Continuous piecewise-linear function on [x.front(), x.back()].
struct PiecewiseLinear {
  std::vector<double> x;
  std::vector<double> v;
};

/// int |u'|^p, exact for piecewise-linear u.
double pl_energy(const PiecewiseLinear& u, double p);

/// int |u|^{a}, and int |u|^{a-1} u when `signed_power` is set; exact per cell
/// up to rounding (closed-form antiderivatives, cells split at sign changes).
double pl_power_integral(const PiecewiseLinear& u, double a, bool signed_power = false);

/// Symmetric decreasing rearrangement of a nonnegative piecewise-linear
/// function (or of the positive part of a sum of several), built from the
/// distribution function, which is itself piecewise linear between nodal
/// values. The result lives on (-|{f > 0}|/2, |{f > 0}|/2) and is again
/// piecewise linear.
PiecewiseLinear symmetric_rearrangement(const std::vector<PiecewiseLinear>& parts);

struct PolyaSzegoReport {
  double energy = 0.0;
  double rearranged_energy = 0.0;
  bool holds = false;  // rearranged_energy <= energy up to a few ulps of rounding
  PiecewiseLinear rearranged;
};

/// Throws NegativeValues or BoundaryNonzero (f must vanish at both ends).
PolyaSzegoReport polya_szego_check_1d(const PiecewiseLinear& f, double p);

struct ReductionReport {
  double quotient_before = 0.0;
  double quotient_after = 0.0;
  double moment_before = 0.0;  // int |u|^{q-2} u
  double moment_after = 0.0;
  double positive_measure = 0.0;  // |{u > 0}| = |B+|
  double negative_measure = 0.0;  // |{u < 0}| = |B-|
  bool non_increasing = false;
  PiecewiseLinear positive_part;  // u+* on B+
  PiecewiseLinear negative_part;  // u-* on B-
};

/// u on a union of intervals (one PiecewiseLinear per component, vanishing at
/// the component ends) split into u+ and u-, each rearranged onto an interval
/// of the same measure. Reports the quotient ||u'||_p / ||u||_q before and
/// after and the signed q-moment. Needs params.dim() == 1. Throws NoSignChange
/// or BoundaryNonzero.
ReductionReport two_ball_reduction_demo(const std::vector<PiecewiseLinear>& components,
                                        const ProblemParams& params);

/// Random test data: nodes with gaps in [0.05, 1.05), values in [0, 1) (about
/// one in ten set to 0, making plateaus and touching zeros likely), zero at
/// both ends. With `sign_changing`, values are drawn from (-1, 1) instead.
PiecewiseLinear random_piecewise_linear(std::mt19937_64& rng, std::size_t max_interior = 20,
                                        bool sign_changing = false);

}  // namespace twisted
