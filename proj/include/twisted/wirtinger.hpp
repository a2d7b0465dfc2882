#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace twisted {

/// lambda^{p,q}((-1, 1)): the odd minimizer is a Dirichlet bump on (0, 1)
/// reflected with a sign flip, so lambda = 2^{1/p - 1/q} Lambda^{p,q}((0, 1)),
/// with Lambda from the N = 1 ball solver on a "ball" of radius 1/2.
double wirtinger_lambda(double p, double q);

struct WirtingerDirect {
  double lambda = 0.0;
  std::size_t iterations = 0;
  double multiplier = 0.0;
  double asymmetry = 0.0;  // max |u(x) + u(-x)| / max |u|; 0 for an odd minimizer
};

/// Discrete constrained minimization on the whole interval, started from a
/// deliberately non-odd sign-changing guess. Throws NonConvergence.
WirtingerDirect wirtinger_lambda_direct(double p, double q, std::size_t cells = 1024);

/// A closed curve t -> (x(t), y(t)) on a uniform grid of [-1, 1] with
/// x(+-1) = y(+-1) = 0.
class ParametricCurve {
 public:
  /// Throws InvalidArgument for fewer than 64 samples, a non-uniform or
  /// non-[-1, 1] parameter grid, or endpoints away from the origin.
  ParametricCurve(std::vector<double> t, std::vector<double> x, std::vector<double> y);

  static ParametricCurve sample(const std::function<std::pair<double, double>(double)>& f,
                                std::size_t samples);

  const std::vector<double>& t() const noexcept { return t_; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  std::size_t size() const noexcept { return t_.size(); }

  ParametricCurve scaled(double factor) const;
  ParametricCurve reversed() const;

 private:
  std::vector<double> t_;
  std::vector<double> x_;
  std::vector<double> y_;
};

/// L = int (|x'|^p + |y'|^p)^{1/p} dt, fourth-order differences and Simpson.
double curve_length_p(const ParametricCurve& curve, double p);

/// M = (1/2) int (y' x - y x') dt.
double curve_area(const ParametricCurve& curve);

/// L^2 - 4 lambda^{p,p'}((-1,1)) M with p' = p / (p - 1).
double isoperimetric_defect(const ParametricCurve& curve, double p);
double isoperimetric_defect(const ParametricCurve& curve, double p, double wirtinger_value);

// Curve generators. All start and end at the origin and run counterclockwise.
// Angles are reparametrized by s -> s - sin(4s)/4, whose derivative vanishes
// where a coordinate crosses zero; this keeps |cos|^a-type samples smooth
// enough for the difference stencils.

ParametricCurve circle_curve(double radius = 1.0, std::size_t samples = 4097);
ParametricCurve ellipse_curve(double a, double b, std::size_t samples = 4097);

/// Boundary of the unit ball of the l^r norm, |x|^r + |y|^r = 1, through
/// x = sgn(cos th)|cos th|^{2/r}, y = sgn(sin th)|sin th|^{2/r}, shifted up by 1.
/// With r = p' this is the equality case of the curve inequality.
ParametricCurve lr_ball_curve(double r, std::size_t samples = 4097);

/// Star-shaped perturbation of the unit circle, rho(th) = 1 + sum a_k cos(k th)
/// + b_k sin(k th) for k = 2..modes with |a_k|, |b_k| <= amplitude / k, re-anchored
/// so the curve starts at the origin.
ParametricCurve random_curve(std::uint64_t seed, double amplitude = 0.15, int modes = 6,
                             std::size_t samples = 4097);

/// Starts the closed curve at a different sample (a fraction of the period
/// later) and translates that point to the origin.
ParametricCurve reanchor(const ParametricCurve& curve, double fraction);

}  // namespace twisted
