#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/shooting.hpp"
#include "twisted/twisted_eigen.hpp"

namespace twisted {

/// Splits of a fixed total volume V between two balls, parametrized by the
/// volume fraction theta = |B1| / V. The grid is symmetric about theta = 1/2,
/// so an odd step count puts the equal split in the middle and every record
/// has a mirror image with R1 and R2 exchanged.
struct SweepSettings {
  double total_volume = 0.0;  // 0 selects omega_N
  std::size_t steps = 33;
  // theta runs over [min_fraction, 1 - min_fraction]. Far from the equal
  // split the boundary flux of the larger ball drops to zero and the
  // one-sign-per-ball radial solution stops existing: near theta = 0.245 for
  // (p, q, N) = (2, 2, 2) and theta = 0.353 for (3, 2, 2).
  double min_fraction = 0.4;
  double tol = 1e-10;
  ShootOptions shoot{};
  std::size_t profile_nodes = 257;
};

struct SweepRecord {
  double theta = 0.0;
  double R1 = 0.0;
  double R2 = 0.0;
  double lambda = 0.0;  // NaN when the solve failed
  double f1 = 0.0;
  double f2 = 0.0;
  double m = 0.0;
  std::string status;  // "ok" or the error kind of a failed solve
};

double resolve_volume(const ProblemParams& params, double total_volume);

/// Radii (R1, R2) of the split with volume fraction theta.
std::pair<double, double> split_radii(const ProblemParams& params, double total_volume,
                                      double theta);

/// Records in grid order. Solves start at the equal split and continue
/// outward, each seeded by its inner neighbour; failures are recorded in
/// `status` and do not stop the sweep.
std::vector<SweepRecord> sweep_volume(const ProblemParams& params,
                                      const SweepSettings& settings = {});

struct SweepSummary {
  std::size_t min_index = 0;
  std::size_t equal_index = 0;
  bool min_at_equal = false;  // lambda(equal) <= lambda(record) for every converged record
  std::size_t failures = 0;
};

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records);

struct OptimalSplit {
  double R1 = 0.0;
  double R2 = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
  std::size_t evaluations = 0;
  bool unimodal = true;  // false: the coarse grid was not unimodal, coarse minimum returned
};

/// Coarse sweep minimum refined by golden-section search on theta until the
/// bracket width in R1 drops below `tol`.
OptimalSplit find_optimal_split(const ProblemParams& params, const SweepSettings& settings = {},
                                double tol = 1e-6);

/// Same, reusing records from sweep_volume with the same settings.
OptimalSplit refine_optimal_split(const ProblemParams& params, const SweepSettings& settings,
                                  const std::vector<SweepRecord>& records, double tol = 1e-6);

/// |f1 - f2| / max(f1, f2).
double check_flux_equality(const TwistedResult& result);

struct DivergenceReport {
  double flux_term1 = 0.0;    // f1^{p-1} |dB1|
  double flux_term2 = 0.0;    // f2^{p-1} |dB2|
  double source_term1 = 0.0;  // k int_{B1} u1^{q-1}
  double source_term2 = 0.0;  // k int_{B2} u2^{q-1}
  double residual = 0.0;        // |flux_term1 - flux_term2| / max
  double cross_residual = 0.0;  // max_i |flux_term_i - source_term_i| / flux_term_i
};

/// Integrating the zero-multiplier equation over each ball gives
/// f_i^{p-1} |dB_i| = k int u_i^{q-1}, so the moment constraint forces
/// f1^{p-1} |dB1| = f2^{p-1} |dB2|. Throws IdentityInapplicable if |m| > m_tol.
DivergenceReport check_divergence_identity(const TwistedResult& result,
                                           const ProblemParams& params, double m_tol = 1e-8);

struct PohozaevReport {
  double boundary_term = 0.0;  // -((p-1)/p) R |dB| f^p
  double interior_term = 0.0;  // int [((N-p)/p)|u'|^p - N G(u)]
  double residual = 0.0;       // |boundary - interior| / scale
};

/// Pohozaev identity on a ball centred at the origin for a profile solving
/// -Delta_p u = g(u), G' = g, G(0) = 0. The boundary flux is the profile's
/// last slope.
PohozaevReport pohozaev_residual(const RadialProfile& profile, const ProblemParams& params,
                                 const SourceTerm& source);

/// (N-p)/p - N/q. For an eigenfunction (m = 0) the interior term equals this
/// coefficient times k int u^q, so a vanishing flux would force it to be 0;
/// it is strictly negative for every admissible triple.
double pohozaev_flux_free_coefficient(const ProblemParams& params);

struct HadamardReport {
  double R1 = 0.0;
  double R2 = 0.0;
  double lambda = 0.0;
  double predicted = 0.0;          // boundary formula
  double finite_difference = 0.0;  // Richardson-extrapolated central difference
  double relative_gap = 0.0;
};

/// d lambda / dt along R1(t) = R1 + t with |B1| + |B2| fixed:
///   -((p-1)/p) lambda^{1-p} (f1^p |dB1| s1 + f2^p |dB2| s2),
/// s1 = 1, s2 = -|dB1| / |dB2|. The step h defaults to 1e-3 R1.
HadamardReport hadamard_derivative(const ProblemParams& params, double R1, double R2,
                                   double h = 0.0, const SweepSettings& settings = {});

}  // namespace twisted
