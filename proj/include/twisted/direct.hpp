#pragma once

#include <cstddef>
#include <vector>

namespace twisted::direct {

/// One connected component of the discretized domain: a uniform 1D grid with
/// weight w(x) = weight_scale * |x|^weight_power (N w_N r^{N-1} for radial
/// balls, 1 for intervals) and continuous piecewise-linear trial functions.
struct Piece {
  std::vector<double> nodes;
  double weight_scale = 1.0;
  int weight_power = 0;
  bool dirichlet_left = false;
  bool dirichlet_right = true;
  int sign = 0;  // +1: values kept >= 0, -1: kept <= 0, 0: unrestricted
};

Piece radial_piece(double radius, std::size_t cells, int dim, int sign);
Piece interval_piece(double a, double b, std::size_t cells);

struct Problem {
  std::vector<Piece> pieces;
  double p = 2.0;
  double q = 2.0;
  bool signed_moment_constraint = false;  // enforce int |u|^{q-2} u = 0
};

struct Options {
  std::size_t max_iterations = 20000;
  double stall_tolerance = 1e-12;  // decrease of log(lambda) per step counted as stalled
  double gradient_tolerance = 1e-9;
};

/// Minimizer of the discrete quotient, normalized to int |u|^q = 1.
struct Solution {
  double lambda = 0.0;
  std::vector<std::vector<double>> values;  // per piece, aligned with nodes
  std::size_t iterations = 0;
  bool converged = false;
  double multiplier = 0.0;            // m in -Delta_p u = lambda^p |u|^{q-2}u + m (q-1)|u|^{q-2}
  double euler_residual = 0.0;        // stationarity residual with the measured multiplier
  double zero_multiplier_residual = 0.0;  // same residual with m forced to 0
  double moment_residual = 0.0;       // |int |u|^{q-2}u| / int (u^+)^{q-1}
};

/// Projected descent with Armijo backtracking, preconditioned by the
/// p-Laplacian stiffness linearized at the current iterate. The signed-moment
/// constraint is restored after every step by rescaling the negative part.
Solution minimize(const Problem& problem, std::vector<std::vector<double>> initial,
                  const Options& options = {});

}  // namespace twisted::direct
