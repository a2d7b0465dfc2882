#include "twisted/wirtinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "twisted/ball_eigen.hpp"
#include "twisted/direct.hpp"
#include "twisted/errors.hpp"
#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"

namespace twisted {

namespace {

// Fourth-order differences on a uniform grid, one-sided five-point at the ends.
std::vector<double> derivative(double h, const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  }
  auto fwd = [&](std::size_t i) {
    return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) /
           (12.0 * h);
  };
  auto fwd1 = [&](std::size_t i) {
    return (-3.0 * f[i - 1] - 10.0 * f[i] + 18.0 * f[i + 1] - 6.0 * f[i + 2] + f[i + 3]) /
           (12.0 * h);
  };
  auto bwd = [&](std::size_t i) {
    return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) /
           (12.0 * h);
  };
  auto bwd1 = [&](std::size_t i) {
    return (3.0 * f[i + 1] + 10.0 * f[i] - 18.0 * f[i - 1] + 6.0 * f[i - 2] - f[i - 3]) /
           (12.0 * h);
  };
  d[0] = fwd(0);
  d[1] = fwd1(1);
  d[n - 1] = bwd(n - 1);
  d[n - 2] = bwd1(n - 2);
  return d;
}

double smoothed_angle(double s) { return s - std::sin(4.0 * s) / 4.0; }

// t in [-1, 1] -> theta running once around from -pi/2.
double angle_of(double t) { return smoothed_angle(std::numbers::pi * t + std::numbers::pi / 2.0); }

double signed_power(double v, double e) { return std::copysign(std::pow(std::abs(v), e), v); }

}  // namespace

double wirtinger_lambda(double p, double q) {
  const auto params = validate(p, q, 1);
  return std::pow(2.0, 1.0 / p - 1.0 / q) * ball_lambda(params, 0.5).lambda;
}

WirtingerDirect wirtinger_lambda_direct(double p, double q, std::size_t cells) {
  validate(p, q, 1);
  if (cells < 64) throw Error(ErrorKind::InvalidArgument, "direct grid needs >= 64 cells");
  direct::Problem problem;
  problem.p = p;
  problem.q = q;
  problem.signed_moment_constraint = true;
  problem.pieces.push_back(direct::interval_piece(-1.0, 1.0, cells));
  std::vector<double> init;
  for (double x : problem.pieces[0].nodes) {
    init.push_back(std::sin(std::numbers::pi * x) + 0.3 * (1.0 - x * x));
  }
  direct::Options opt;
  auto sol = direct::minimize(problem, {std::move(init)}, opt);
  if (!sol.converged) throw Error(ErrorKind::NonConvergence, "direct Wirtinger minimization");
  WirtingerDirect out;
  out.lambda = sol.lambda;
  out.iterations = sol.iterations;
  out.multiplier = sol.multiplier;
  const auto& u = sol.values[0];
  double top = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    top = std::max(top, std::abs(u[i]));
    asym = std::max(asym, std::abs(u[i] + u[u.size() - 1 - i]));
  }
  out.asymmetry = top > 0.0 ? asym / top : 0.0;
  return out;
}

ParametricCurve::ParametricCurve(std::vector<double> t, std::vector<double> x,
                                 std::vector<double> y)
    : t_(std::move(t)), x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n < 64) throw Error(ErrorKind::InvalidArgument, "a curve needs at least 64 samples");
  if (x_.size() != n || y_.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "curve samples must have equal lengths");
  }
  if (std::abs(t_.front() + 1.0) > 1e-14 || std::abs(t_.back() - 1.0) > 1e-14) {
    throw Error(ErrorKind::InvalidArgument, "curve parameter must span [-1, 1]");
  }
  const double h = 2.0 / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((t_[i] - t_[i - 1]) - h) > 1e-9 * h) {
      throw Error(ErrorKind::InvalidArgument, "curve parameter grid must be uniform");
    }
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw Error(ErrorKind::InvalidArgument, "curve samples must be finite");
    }
    scale = std::max({scale, std::abs(x_[i]), std::abs(y_[i])});
  }
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i : {std::size_t{0}, n - 1}) {
    if (std::abs(x_[i]) > tol || std::abs(y_[i]) > tol) {
      throw Error(ErrorKind::InvalidArgument, "curve must start and end at the origin");
    }
  }
}

ParametricCurve ParametricCurve::sample(
    const std::function<std::pair<double, double>(double)>& f, std::size_t samples) {
  std::vector<double> t(samples), x(samples), y(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    std::tie(x[i], y[i]) = f(t[i]);
  }
  t.back() = 1.0;
  x.front() = y.front() = x.back() = y.back() = 0.0;
  return ParametricCurve(std::move(t), std::move(x), std::move(y));
}

ParametricCurve ParametricCurve::scaled(double factor) const {
  auto x = x_, y = y_;
  for (auto& v : x) v *= factor;
  for (auto& v : y) v *= factor;
  return ParametricCurve(t_, std::move(x), std::move(y));
}

ParametricCurve ParametricCurve::reversed() const {
  std::vector<double> x(x_.rbegin(), x_.rend()), y(y_.rbegin(), y_.rend());
  return ParametricCurve(t_, std::move(x), std::move(y));
}

double curve_length_p(const ParametricCurve& curve, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::InvalidArgument, "p must exceed 1");
  const double h = curve.t()[1] - curve.t()[0];
  const auto dx = derivative(h, curve.x());
  const auto dy = derivative(h, curve.y());
  std::vector<double> speed(curve.size());
  for (std::size_t i = 0; i < speed.size(); ++i) {
    speed[i] = std::pow(std::pow(std::abs(dx[i]), p) + std::pow(std::abs(dy[i]), p), 1.0 / p);
  }
  return simpson(curve.t(), speed);
}

double curve_area(const ParametricCurve& curve) {
  const double h = curve.t()[1] - curve.t()[0];
  const auto dx = derivative(h, curve.x());
  const auto dy = derivative(h, curve.y());
  const auto& x = curve.x();
  const auto& y = curve.y();
  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.5 * (dy[i] * x[i] - y[i] * dx[i]);
  return simpson(curve.t(), f);
}

double isoperimetric_defect(const ParametricCurve& curve, double p, double wirtinger_value) {
  const double L = curve_length_p(curve, p);
  return L * L - 4.0 * wirtinger_value * curve_area(curve);
}

double isoperimetric_defect(const ParametricCurve& curve, double p) {
  return isoperimetric_defect(curve, p, wirtinger_lambda(p, conjugate_exponent(p)));
}

ParametricCurve circle_curve(double radius, std::size_t samples) {
  return ParametricCurve::sample(
      [radius](double t) {
        const double th = angle_of(t);
        return std::pair{radius * std::cos(th), radius * (std::sin(th) + 1.0)};
      },
      samples);
}

ParametricCurve ellipse_curve(double a, double b, std::size_t samples) {
  return ParametricCurve::sample(
      [a, b](double t) {
        const double th = angle_of(t);
        return std::pair{a * std::cos(th), b * (std::sin(th) + 1.0)};
      },
      samples);
}

ParametricCurve lr_ball_curve(double r, std::size_t samples) {
  if (!(r >= 1.0)) throw Error(ErrorKind::InvalidArgument, "l^r ball needs r >= 1");
  const double e = 2.0 / r;
  return ParametricCurve::sample(
      [e](double t) {
        const double th = angle_of(t);
        return std::pair{signed_power(std::cos(th), e), signed_power(std::sin(th), e) + 1.0};
      },
      samples);
}

ParametricCurve random_curve(std::uint64_t seed, double amplitude, int modes,
                             std::size_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> a(modes + 1, 0.0), b(modes + 1, 0.0);
  for (int k = 2; k <= modes; ++k) {
    a[k] = amplitude * coef(rng) / k;
    b[k] = amplitude * coef(rng) / k;
  }
  auto point = [&](double th) {
    double rho = 1.0;
    for (int k = 2; k <= modes; ++k) rho += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
    return std::pair{rho * std::cos(th), rho * std::sin(th)};
  };
  const auto start = point(-std::numbers::pi / 2.0);
  return ParametricCurve::sample(
      [&](double t) {
        auto [x, y] = point(angle_of(t));
        return std::pair{x - start.first, y - start.second};
      },
      samples);
}

ParametricCurve reanchor(const ParametricCurve& curve, double fraction) {
  const std::size_t period = curve.size() - 1;
  const auto shift = static_cast<std::size_t>(std::llround(fraction * period)) % period;
  std::vector<double> x(curve.size()), y(curve.size());
  const double x0 = curve.x()[shift], y0 = curve.y()[shift];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const std::size_t j = (i + shift) % period;
    x[i] = curve.x()[j] - x0;
    y[i] = curve.y()[j] - y0;
  }
  x.back() = y.back() = 0.0;
  return ParametricCurve(curve.t(), std::move(x), std::move(y));
}

}  // namespace twisted
