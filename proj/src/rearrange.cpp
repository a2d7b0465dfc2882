#include "twisted/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"

namespace twisted {

namespace {

// Neumaier compensated summation.
class Sum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_sampled(const SampledFunction& f) {
  if (f.values.size() != f.weights.size() || f.values.empty()) {
    throw Error(ErrorKind::InvalidArgument, "values and weights must be non-empty and aligned");
  }
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!(f.weights[i] > 0.0) || !std::isfinite(f.weights[i]) || !std::isfinite(f.values[i])) {
      throw Error(ErrorKind::InvalidArgument, "weights must be positive and values finite");
    }
    if (f.values[i] < 0.0) throw Error(ErrorKind::NegativeValues, "rearrangement needs f >= 0");
  }
}

void check_pl(const PiecewiseLinear& u) {
  if (u.x.size() < 2 || u.x.size() != u.v.size()) {
    throw Error(ErrorKind::InvalidArgument, "piecewise-linear data needs >= 2 aligned nodes");
  }
  for (std::size_t i = 1; i < u.x.size(); ++i) {
    if (!(u.x[i] > u.x[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "piecewise-linear nodes must increase");
    }
  }
}

void check_zero_ends(const PiecewiseLinear& u) {
  if (u.v.front() != 0.0 || u.v.back() != 0.0) {
    throw Error(ErrorKind::BoundaryNonzero, "function must vanish at both interval ends");
  }
}

// int over one cell of s^a for the linear function from fa to fb (both >= 0).
double cell_power(double dx, double fa, double fb, double a) {
  const double d = fb - fa;
  const double mid = 0.5 * (fa + fb);
  if (std::abs(d) <= 1e-6 * std::max(std::abs(mid), 1e-300)) {
    // Taylor around the midpoint: psi(m) + psi''(m) d^2 / 24.
    if (mid == 0.0) return 0.0;
    return dx * (std::pow(mid, a) + a * (a - 1.0) * std::pow(mid, a - 2.0) * d * d / 24.0);
  }
  return dx * (std::pow(fb, a + 1.0) - std::pow(fa, a + 1.0)) / ((a + 1.0) * d);
}

// Measure of {f > c} (strict) or {f >= c} on one linear cell.
double cell_measure(double dx, double fa, double fb, double c, bool strict) {
  if (fa == fb) return (strict ? fa > c : fa >= c) ? dx : 0.0;
  const double hi = std::max(fa, fb), lo = std::min(fa, fb);
  if (c >= hi) return 0.0;
  if (c <= lo) return dx;
  return dx * (hi - c) / (hi - lo);
}

}  // namespace

SampledFunction decreasing_rearrangement(const SampledFunction& f) {
  check_sampled(f);
  std::vector<std::size_t> order(f.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.values[a] > f.values[b]; });
  SampledFunction out;
  out.domain = f.domain;
  for (std::size_t i : order) {
    out.values.push_back(f.values[i]);
    out.weights.push_back(f.weights[i]);
  }
  return out;
}

std::vector<double> annulus_radii(const SampledFunction& rearranged, int dim) {
  check_sampled(rearranged);
  const double w = unit_ball_measure(dim);
  std::vector<double> radii;
  Sum cumulative;
  for (double weight : rearranged.weights) {
    cumulative.add(weight);
    radii.push_back(std::pow(cumulative.value() / w, 1.0 / dim));
  }
  return radii;
}

double check_equimeasurable(const SampledFunction& f, double power) {
  const auto g = decreasing_rearrangement(f);
  Sum before, after;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    before.add(f.weights[i] * std::pow(f.values[i], power));
    after.add(g.weights[i] * std::pow(g.values[i], power));
  }
  return std::abs(before.value() - after.value());
}

double pl_energy(const PiecewiseLinear& u, double p) {
  check_pl(u);
  Sum e;
  for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
    const double dx = u.x[i + 1] - u.x[i];
    e.add(dx * std::pow(std::abs((u.v[i + 1] - u.v[i]) / dx), p));
  }
  return e.value();
}

double pl_power_integral(const PiecewiseLinear& u, double a, bool signed_power) {
  check_pl(u);
  Sum s;
  for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
    const double dx = u.x[i + 1] - u.x[i];
    const double fa = u.v[i], fb = u.v[i + 1];
    auto add_piece = [&](double len, double ga, double gb) {
      // ga, gb share a sign (or vanish).
      const double sign = (ga + gb) < 0.0 ? -1.0 : 1.0;
      const double val = cell_power(len, std::abs(ga), std::abs(gb), a);
      s.add(signed_power ? sign * val : val);
    };
    if ((fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0)) {
      const double cut = dx * fa / (fa - fb);
      add_piece(cut, fa, 0.0);
      add_piece(dx - cut, 0.0, fb);
    } else {
      add_piece(dx, fa, fb);
    }
  }
  return s.value();
}

PiecewiseLinear symmetric_rearrangement(const std::vector<PiecewiseLinear>& parts) {
  std::vector<double> levels{0.0};
  for (const auto& u : parts) {
    check_pl(u);
    for (double v : u.v) {
      if (v < 0.0) throw Error(ErrorKind::NegativeValues, "rearrangement needs f >= 0");
      levels.push_back(v);
    }
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto measure = [&](double c, bool strict) {
    Sum m;
    for (const auto& u : parts) {
      for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
        m.add(cell_measure(u.x[i + 1] - u.x[i], u.v[i], u.v[i + 1], c, strict));
      }
    }
    return m.value();
  };

  // Right half, from the centre outward; the level-0 plateau is dropped so
  // the support is exactly {f > 0}.
  std::vector<double> rx, rv;
  auto push = [&](double x, double v) {
    if (!rx.empty() && x <= rx.back()) return;
    rx.push_back(x);
    rv.push_back(v);
  };
  for (double c : levels) {
    const double gt = 0.5 * measure(c, true);
    if (rx.empty()) {
      rx.push_back(gt);
      rv.push_back(c);
    } else {
      push(gt, c);
    }
    if (c > 0.0) push(0.5 * measure(c, false), c);
  }
  PiecewiseLinear out;
  for (std::size_t i = rx.size(); i-- > 0;) {
    if (rx[i] == 0.0) continue;
    out.x.push_back(-rx[i]);
    out.v.push_back(rv[i]);
  }
  for (std::size_t i = 0; i < rx.size(); ++i) {
    out.x.push_back(rx[i]);
    out.v.push_back(rv[i]);
  }
  return out;
}

PolyaSzegoReport polya_szego_check_1d(const PiecewiseLinear& f, double p) {
  check_pl(f);
  check_zero_ends(f);
  PolyaSzegoReport rep{0.0, 0.0, false, symmetric_rearrangement({f})};
  rep.energy = pl_energy(f, p);
  rep.rearranged_energy = rep.rearranged.x.size() >= 2 ? pl_energy(rep.rearranged, p) : 0.0;
  rep.holds = rep.rearranged_energy <= rep.energy * (1.0 + 1e-12);
  return rep;
}

ReductionReport two_ball_reduction_demo(const std::vector<PiecewiseLinear>& components,
                                        const ProblemParams& params) {
  if (params.dim() != 1) {
    throw Error(ErrorKind::InvalidArgument, "the exact reduction demo works on intervals (dim 1)");
  }
  const double p = params.p();
  const double q = params.q();
  std::vector<PiecewiseLinear> pos, neg;
  double energy = 0.0, mass = 0.0, moment = 0.0;
  for (const auto& u : components) {
    check_pl(u);
    check_zero_ends(u);
    energy += pl_energy(u, p);
    mass += pl_power_integral(u, q);
    moment += pl_power_integral(u, q - 1.0, true);
    // Split at sign changes so that both parts stay piecewise linear.
    PiecewiseLinear up, un;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
      if (i > 0) {
        const double fa = u.v[i - 1], fb = u.v[i];
        if ((fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0)) {
          const double xc = u.x[i - 1] + (u.x[i] - u.x[i - 1]) * fa / (fa - fb);
          up.x.push_back(xc);
          up.v.push_back(0.0);
          un.x.push_back(xc);
          un.v.push_back(0.0);
        }
      }
      up.x.push_back(u.x[i]);
      up.v.push_back(std::max(u.v[i], 0.0));
      un.x.push_back(u.x[i]);
      un.v.push_back(std::max(-u.v[i], 0.0));
    }
    pos.push_back(std::move(up));
    neg.push_back(std::move(un));
  }
  auto support = [](const std::vector<PiecewiseLinear>& parts) {
    double m = 0.0;
    for (const auto& u : parts) {
      for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
        m += cell_measure(u.x[i + 1] - u.x[i], u.v[i], u.v[i + 1], 0.0, true);
      }
    }
    return m;
  };
  ReductionReport rep;
  rep.positive_measure = support(pos);
  rep.negative_measure = support(neg);
  if (rep.positive_measure == 0.0 || rep.negative_measure == 0.0) {
    throw Error(ErrorKind::NoSignChange, "u must take both signs");
  }
  rep.positive_part = symmetric_rearrangement(pos);
  rep.negative_part = symmetric_rearrangement(neg);
  rep.quotient_before = std::pow(energy, 1.0 / p) / std::pow(mass, 1.0 / q);
  const double e_after = pl_energy(rep.positive_part, p) + pl_energy(rep.negative_part, p);
  const double m_after = pl_power_integral(rep.positive_part, q) +
                         pl_power_integral(rep.negative_part, q);
  rep.quotient_after = std::pow(e_after, 1.0 / p) / std::pow(m_after, 1.0 / q);
  rep.moment_before = moment;
  rep.moment_after = pl_power_integral(rep.positive_part, q - 1.0) -
                     pl_power_integral(rep.negative_part, q - 1.0);
  rep.non_increasing = rep.quotient_after <= rep.quotient_before * (1.0 + 1e-12);
  return rep;
}

PiecewiseLinear random_piecewise_linear(std::mt19937_64& rng, std::size_t max_interior,
                                        bool sign_changing) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(max_interior));
  PiecewiseLinear f;
  double x = 0.0;
  f.x.push_back(x);
  f.v.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    x += 0.05 + unit(rng);
    f.x.push_back(x);
    const double v = sign_changing ? 2.0 * unit(rng) - 1.0 : unit(rng);
    f.v.push_back(unit(rng) < 0.1 ? 0.0 : v);
  }
  x += 0.05 + unit(rng);
  f.x.push_back(x);
  f.v.push_back(0.0);
  return f;
}

}  // namespace twisted
