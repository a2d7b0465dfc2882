#include "twisted/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "twisted/errors.hpp"

namespace twisted {

double SourceTerm::operator()(double phi, double q) const noexcept {
  const double a = std::abs(phi);
  if (a == 0.0) return (q == 2.0) ? m : 0.0;
  const double aq2 = std::pow(a, q - 2.0);
  return k * aq2 * phi + m * (q - 1.0) * aq2;
}

double SourceTerm::primitive(double u, double q) const noexcept {
  const double a = std::abs(u);
  if (a == 0.0) return 0.0;
  return k * std::pow(a, q) / q + m * std::pow(a, q - 2.0) * u;
}

namespace detail {

using State = ode::State<6>;
enum : std::size_t { kPhi = 0, kMomentum, kIq, kIq1, kIq2, kIgrad };

struct Trajectory {
  double p = 2.0;
  double q = 2.0;
  int dim = 1;
  double c = 1.0;
  SourceTerm source;
  double eps = 0.0;
  double g0 = 0.0;            // g(c)
  double series_coeff = 0.0;  // (|g(c)|/N)^{1/(p-1)}
  std::vector<ode::DenseSegment<6>> segments;
  double end = 0.0;
  bool reached_zero = false;
  ShotIntegrals integrals;

  double sign_g() const { return g0 >= 0.0 ? 1.0 : -1.0; }

  double series_phi(double r) const {
    return c - sign_g() * series_coeff * ((p - 1.0) / p) * std::pow(r, p / (p - 1.0));
  }
  double series_slope(double r) const {
    return -sign_g() * series_coeff * std::pow(r, 1.0 / (p - 1.0));
  }
  double series_momentum(double r) const { return -g0 * std::pow(r, dim) / dim; }

  const ode::DenseSegment<6>& segment_at(double r) const {
    auto it = std::upper_bound(segments.begin(), segments.end(), r,
                               [](double x, const auto& seg) { return x < seg.t0; });
    if (it == segments.begin()) return segments.front();
    return *std::prev(it);
  }

  double phi(double r) const {
    r = std::clamp(r, 0.0, end);
    if (r <= eps) return series_phi(r);
    if (reached_zero && r == end) return 0.0;
    return segment_at(r).component(kPhi, r);
  }

  double momentum(double r) const {
    r = std::clamp(r, 0.0, end);
    if (r <= eps) return series_momentum(r);
    return segment_at(r).component(kMomentum, r);
  }

  double slope_from_momentum(double r, double w) const {
    const double rn1 = dim == 1 ? 1.0 : std::pow(r, dim - 1);
    return std::copysign(std::pow(std::abs(w) / rn1, 1.0 / (p - 1.0)), w);
  }

  double slope(double r) const {
    r = std::clamp(r, 0.0, end);
    if (r <= eps) return series_slope(r);
    return slope_from_momentum(r, momentum(r));
  }
};

std::shared_ptr<Trajectory> integrate(const ProblemParams& params, const SourceTerm& source,
                                      double c, double r_max, const ShootOptions& options,
                                      bool require_zero) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::NonPositiveInitial, "initial value must be positive");
  }
  const double p = params.p();
  const double q = params.q();
  const int dim = params.dim();
  if (source.m != 0.0 && q < 2.0) {
    throw Error(ErrorKind::SingularSource, "multiplier term |phi|^{q-2} is singular for q < 2");
  }
  if (!(r_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");

  auto traj = std::make_shared<Trajectory>();
  traj->p = p;
  traj->q = q;
  traj->dim = dim;
  traj->c = c;
  traj->source = source;
  traj->g0 = source(c, q);
  if (traj->g0 == 0.0) {
    throw Error(ErrorKind::NoZeroFound, "g(c) = 0: the solution is constant");
  }
  traj->series_coeff = std::pow(std::abs(traj->g0) / dim, 1.0 / (p - 1.0));
  const double length_scale = std::pow(std::pow(c, p - 1.0) / std::abs(traj->g0), 1.0 / p);
  traj->eps = std::min(options.startup_fraction * length_scale, 0.5 * r_max);
  const double eps = traj->eps;
  const bool track_q2 = q >= 2.0;

  auto rhs = [p, q, dim, source, track_q2](double r, const State& y) {
    const double rn1 = dim == 1 ? 1.0 : std::pow(r, dim - 1);
    const double phi = y[kPhi];
    const double w = y[kMomentum];
    const double dphi = std::copysign(std::pow(std::abs(w) / rn1, 1.0 / (p - 1.0)), w);
    const double a = std::abs(phi);
    State d{};
    d[kPhi] = dphi;
    d[kMomentum] = -rn1 * source(phi, q);
    d[kIq] = std::pow(a, q) * rn1;
    d[kIq1] = (a == 0.0 ? 0.0 : std::copysign(std::pow(a, q - 1.0), phi)) * rn1;
    d[kIq2] = track_q2 ? std::pow(a, q - 2.0) * rn1 : 0.0;
    d[kIgrad] = std::pow(std::abs(dphi), p) * rn1;
    return d;
  };
  ode::DormandPrince<6, decltype(rhs)> stepper(rhs, options.tolerances);

  const double eps_n = std::pow(eps, dim);
  State y{};
  y[kPhi] = traj->series_phi(eps);
  y[kMomentum] = traj->series_momentum(eps);
  y[kIq] = std::pow(c, q) * eps_n / dim;
  y[kIq1] = std::pow(c, q - 1.0) * eps_n / dim;
  y[kIq2] = track_q2 ? std::pow(c, q - 2.0) * eps_n / dim : 0.0;
  {
    const double e = dim + p / (p - 1.0);
    y[kIgrad] = std::pow(traj->series_coeff, p) * std::pow(eps, e) / e;
  }

  double r = eps;
  State f = stepper.rhs(r, y);
  double h = eps;
  std::size_t steps = 0;
  bool done = false;

  while (!done) {
    if (r >= r_max * (1.0 - 1e-15)) break;
    if (++steps > options.max_steps) {
      throw Error(ErrorKind::NonConvergence, "shooting exceeded the step budget");
    }
    h = std::min(h, r_max - r);
    auto trial = stepper.attempt(r, y, f, h);
    if (!(trial.error <= 1.0) || !std::isfinite(trial.y1[kPhi])) {
      const double factor = std::isfinite(trial.error) ? stepper.step_factor(trial.error) : 0.2;
      h *= std::min(factor, 0.9);
      if (h < 1e-14 * std::max(r, eps)) {
        throw Error(ErrorKind::NonConvergence, "step size underflow in shooting");
      }
      continue;
    }
    if (trial.y1[kPhi] <= 0.0 && y[kPhi] > 0.0) {
      // First zero inside this step: root-find on the step polynomial itself.
      auto phi_after = [&](double s) {
        if (s <= 0.0) return y[kPhi];
        return stepper.attempt(r, y, f, s).y1[kPhi];
      };
      std::uintmax_t max_iter = 200;
      const double zero_tol = options.zero_tol;
      auto stop = [zero_tol](double a, double b) { return std::abs(b - a) <= zero_tol; };
      double s_star = h;
      const double at_h = trial.y1[kPhi];
      if (at_h != 0.0) {
        auto bracket = boost::math::tools::toms748_solve(phi_after, 0.0, h, y[kPhi], at_h, stop,
                                                         max_iter);
        // Take the end where phi is closest to zero.
        const double fa = phi_after(bracket.first);
        const double fb = phi_after(bracket.second);
        s_star = std::abs(fa) <= std::abs(fb) ? bracket.first : bracket.second;
        if (s_star <= 0.0) s_star = bracket.second;
      }
      trial = stepper.attempt(r, y, f, s_star);
      traj->segments.push_back(stepper.dense(r, y, trial));
      r += s_star;
      y = trial.y1;
      traj->reached_zero = true;
      done = true;
      break;
    }
    traj->segments.push_back(stepper.dense(r, y, trial));
    r += h;
    y = trial.y1;
    f = trial.f1;
    h *= stepper.step_factor(trial.error);
  }

  if (!traj->reached_zero && require_zero) {
    std::ostringstream os;
    os << "phi stays positive up to r_max = " << r_max;
    throw Error(ErrorKind::NoZeroFound, os.str());
  }
  if (traj->segments.empty()) {
    throw Error(ErrorKind::NonConvergence, "no integration step was taken");
  }
  traj->end = r;
  traj->integrals.q = y[kIq];
  traj->integrals.q_minus_1 = y[kIq1];
  traj->integrals.q_minus_2 = y[kIq2];
  traj->integrals.grad = y[kIgrad];
  return traj;
}

}  // namespace detail

double ShotResult::initial_value() const noexcept { return amplitude_ * base_->c; }
double ShotResult::first_zero() const noexcept { return base_->end / dilation_; }
double ShotResult::boundary_slope() const noexcept { return slope(first_zero()); }
int ShotResult::dim() const noexcept { return base_->dim; }
double ShotResult::p() const noexcept { return base_->p; }
double ShotResult::q() const noexcept { return base_->q; }
std::size_t ShotResult::accepted_steps() const noexcept { return base_->segments.size(); }

double ShotResult::phi(double r) const { return amplitude_ * base_->phi(dilation_ * r); }

double ShotResult::slope(double r) const {
  return amplitude_ * dilation_ * base_->slope(dilation_ * r);
}

double ShotResult::momentum(double r) const {
  const double p = base_->p;
  return std::pow(amplitude_ * dilation_, p - 1.0) * std::pow(dilation_, 1 - base_->dim) *
         base_->momentum(dilation_ * r);
}

std::vector<TrajectoryPoint> ShotResult::trajectory() const {
  std::vector<TrajectoryPoint> pts;
  pts.reserve(base_->segments.size() + 1);
  for (const auto& seg : base_->segments) {
    const double r = seg.t0 / dilation_;
    pts.push_back({r, phi(r), momentum(r)});
  }
  const double r_end = first_zero();
  pts.push_back({r_end, phi(r_end), momentum(r_end)});
  return pts;
}

RadialProfile ShotResult::profile(std::size_t node_count) const {
  auto grid = RadialGrid::uniform(first_zero(), node_count, base_->dim);
  std::vector<double> values(node_count);
  std::vector<double> slopes(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    values[i] = phi(grid[i]);
    slopes[i] = slope(grid[i]);
  }
  if (base_->reached_zero) values.back() = 0.0;
  return RadialProfile(std::move(grid), std::move(values), std::move(slopes));
}

ShotResult shoot(const ProblemParams& params, const SourceTerm& source, double c, double r_max,
                 const ShootOptions& options) {
  ShotResult shot;
  auto traj = detail::integrate(params, source, c, r_max, options, true);
  shot.source_ = source;
  shot.integrals_ = traj->integrals;
  shot.base_ = std::move(traj);
  return shot;
}

ShotResult rescale_shot(const ShotResult& shot, const ProblemParams& params, double A, double B) {
  if (shot.source().m != 0.0) {
    throw Error(ErrorKind::RescaleWithMultiplier,
                "the A phi(B r) family only preserves the equation when m = 0");
  }
  if (!(A > 0.0) || !(B > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "rescale factors must be positive");
  }
  const double p = params.p();
  const double q = params.q();
  const double n = params.dim();
  ShotResult out = shot;
  out.amplitude_ = shot.amplitude_ * A;
  out.dilation_ = shot.dilation_ * B;
  out.source_.k = std::pow(A, p - q) * std::pow(B, p) * shot.source_.k;
  const double bn = std::pow(B, -n);
  out.integrals_.q = shot.integrals_.q * std::pow(A, q) * bn;
  out.integrals_.q_minus_1 = shot.integrals_.q_minus_1 * std::pow(A, q - 1.0) * bn;
  out.integrals_.q_minus_2 = shot.integrals_.q_minus_2 * std::pow(A, q - 2.0) * bn;
  out.integrals_.grad = shot.integrals_.grad * std::pow(A, p) * std::pow(B, p - n);
  return out;
}

ComparisonReport check_comparison(const ProblemParams& params, double c1, double c2, double R,
                                  double tolerance, std::size_t samples,
                                  const ShootOptions& options) {
  if (!(c1 < c2)) throw Error(ErrorKind::InvalidArgument, "comparison needs c1 < c2");
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "comparison radius must be positive");
  const SourceTerm unit{1.0, 0.0};
  auto t1 = detail::integrate(params, unit, c1, R, options, false);
  auto t2 = detail::integrate(params, unit, c2, R, options, false);

  ComparisonReport rep;
  rep.c1 = c1;
  rep.c2 = c2;
  rep.first_zero_1 = t1->reached_zero ? t1->end : std::numeric_limits<double>::infinity();
  rep.first_zero_2 = t2->reached_zero ? t2->end : std::numeric_limits<double>::infinity();
  rep.domain_end = std::min({R, t1->end, t2->end});
  rep.tolerance = tolerance;
  rep.max_difference = -std::numeric_limits<double>::infinity();
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rep.domain_end * static_cast<double>(i) / static_cast<double>(n - 1);
    const double d = t1->phi(r) - t2->phi(r);
    if (d > rep.max_difference) {
      rep.max_difference = d;
      rep.argmax = r;
    }
  }
  rep.pass = rep.max_difference <= tolerance;
  return rep;
}

}  // namespace twisted
