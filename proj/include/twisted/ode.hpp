#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace twisted::ode {

template <std::size_t Dim>
using State = std::array<double, Dim>;

/// Continuous extension of one Dormand-Prince step (4th order), in Hairer's
/// five-coefficient form.
template <std::size_t Dim>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<Dim>, 5> coeff{};

  double t1() const noexcept { return t0 + h; }

  double component(std::size_t i, double t) const noexcept {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    return coeff[0][i] +
           theta * (coeff[1][i] +
                    theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
  }

  State<Dim> operator()(double t) const noexcept {
    State<Dim> y{};
    for (std::size_t i = 0; i < Dim; ++i) y[i] = component(i, t);
    return y;
  }
};

struct Tolerances {
  double rtol = 1e-12;
  double atol = 1e-14;
};

/// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with FSAL.
/// `Rhs` is any callable `State f(double t, const State& y)`.
template <std::size_t Dim, class Rhs>
class DormandPrince {
 public:
  using StateT = State<Dim>;

  struct Trial {
    double h = 0.0;
    StateT y1{};
    StateT f1{};  // f(t + h, y1), reused as the next step's first stage
    std::array<StateT, 7> k{};
    double error = 0.0;  // scaled RMS error estimate; accept when <= 1
  };

  DormandPrince(Rhs rhs, Tolerances tol) : rhs_(std::move(rhs)), tol_(tol) {}

  StateT rhs(double t, const StateT& y) const { return rhs_(t, y); }

  Trial attempt(double t, const StateT& y, const StateT& f0, double h) const {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Trial tr;
    tr.h = h;
    auto& k = tr.k;
    k[0] = f0;
    StateT tmp{};
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
    k[1] = rhs_(t + c2 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    k[2] = rhs_(t + c3 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    k[3] = rhs_(t + c4 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    k[4] = rhs_(t + c5 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                           a65 * k[4][i]);
    k[5] = rhs_(t + h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tr.y1[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                             a76 * k[5][i]);
    k[6] = rhs_(t + h, tr.y1);
    tr.f1 = k[6];

    double sum = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double err = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                              e6 * k[5][i] + e7 * k[6][i]);
      const double scale = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(tr.y1[i]));
      sum += (err / scale) * (err / scale);
    }
    tr.error = std::sqrt(sum / static_cast<double>(Dim));
    return tr;
  }

  DenseSegment<Dim> dense(double t, const StateT& y, const Trial& tr) const {
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    DenseSegment<Dim> seg;
    seg.t0 = t;
    seg.h = tr.h;
    const auto& k = tr.k;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double ydiff = tr.y1[i] - y[i];
      const double bspl = tr.h * k[0][i] - ydiff;
      seg.coeff[0][i] = y[i];
      seg.coeff[1][i] = ydiff;
      seg.coeff[2][i] = bspl;
      seg.coeff[3][i] = ydiff - tr.h * k[6][i] - bspl;
      seg.coeff[4][i] = tr.h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                                d6 * k[5][i] + d7 * k[6][i]);
    }
    return seg;
  }

  /// Step-size factor after a trial with the given error (clamped to [0.2, 5]).
  static double step_factor(double error) noexcept {
    if (error <= 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(error, -0.2), 0.2, 5.0);
  }

 private:
  Rhs rhs_;
  Tolerances tol_;
};

}  // namespace twisted::ode
