#include <doctest.h>

#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "twisted/ball_eigen.hpp"
#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"

using namespace twisted;
using std::numbers::pi;

namespace {

using Triple = std::tuple<double, double, int>;

const std::vector<Triple>& matrix() {
  static const std::vector<Triple> m{{2, 2, 2}, {2, 2, 3}, {3, 2, 2},
                                     {2, 3, 2}, {1.5, 2, 3}, {3, 2.5, 2}};
  return m;
}

}  // namespace

TEST_CASE("linear balls: pi in 3D, j01 in 2D, pi/2 at radius 2") {
  CHECK(ball_lambda(validate(2, 2, 3), 1.0).lambda == doctest::Approx(pi).epsilon(1e-10));
  CHECK(ball_lambda(validate(2, 2, 2), 1.0).lambda ==
        doctest::Approx(oracle::bessel_zero(0.0)).epsilon(1e-10));
  CHECK(ball_lambda(validate(2, 2, 3), 2.0).lambda == doctest::Approx(pi / 2).epsilon(1e-10));
  // N = 4: j_{1,1}
  CHECK(ball_lambda(validate(2, 2, 4), 1.0).lambda ==
        doctest::Approx(oracle::bessel_zero(1.0)).epsilon(1e-10));
}

TEST_CASE("one-dimensional balls match the Beta-function closed form") {
  for (auto [p, q] : std::vector<std::pair<double, double>>{
           {3, 2}, {2, 3}, {1.5, 2.5}, {4, 4}, {2.5, 1.4}, {1.3, 5.0}}) {
    CHECK_MESSAGE(ball_lambda(validate(p, q, 1), 0.5).lambda ==
                      doctest::Approx(oracle::interval_quotient(p, q)).epsilon(1e-9),
                  "p=" << p << " q=" << q);
  }
}

TEST_CASE("nonlinear balls agree with the direct minimizer") {
  // Values cross-checked against ball_lambda_direct to within 5e-7.
  const std::vector<std::pair<Triple, double>> frozen{
      {{3, 2, 2}, 2.004452980777},   {{2, 3, 2}, 2.578470713858},
      {{1.5, 2, 3}, 3.961860588572}, {{3, 2.5, 2}, 2.101655924630},
  };
  for (const auto& [t, value] : frozen) {
    const auto [p, q, N] = t;
    CHECK(ball_lambda(validate(p, q, N), 1.0).lambda == doctest::Approx(value).epsilon(1e-9));
  }
  for (const auto& [p, q, N] : matrix()) {
    const auto P = validate(p, q, N);
    const double structured = ball_lambda(P, 1.0).lambda;
    const double direct = ball_lambda_direct(P, 1.0).lambda;
    CHECK_MESSAGE(std::abs(structured - direct) / structured < 1e-3, "p=" << p << " q=" << q << " N=" << N);
    CHECK(direct >= structured * (1.0 - 1e-6));  // the discrete minimizer is an upper bound up to quadrature
  }
}

TEST_CASE("normalized profile: positive, decreasing, unit q-norm, Euler residual") {
  for (const auto& [p, q, N] : matrix()) {
    const auto P = validate(p, q, N);
    const auto ball = ball_lambda(P, 1.3);
    const auto v = ball.profile.values();
    CHECK(v.back() == doctest::Approx(0.0));
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      CHECK(v[i] > 0.0);
      CHECK(v[i + 1] <= v[i]);
    }
    CHECK(lq_norm(ball.profile, q) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ball.euler_k == doctest::Approx(std::pow(ball.lambda, p)).epsilon(1e-12));
    CHECK(grad_lp_seminorm(ball.profile, p) == doctest::Approx(ball.lambda).epsilon(1e-8));
    CHECK(euler_profile_residual(ball.profile, P, {ball.euler_k, 0.0}) < 1e-6);
    CHECK(ball.energy_residual < 1e-8);
  }
}

TEST_CASE("scaling law") {
  const auto P3 = validate(2, 2, 3);
  CHECK(scaling_check(P3, 1.0, 1.0) < 1e-14);
  CHECK(scaling_check(P3, 1.0, 2.0) < 1e-8);
  CHECK(scaling_check(validate(2, 3, 2), 1.0, 1.5) < 1e-8);
  for (const auto& [p, q, N] : matrix()) {
    for (double t : {0.5, 2.0}) CHECK(scaling_check(validate(p, q, N), 1.0, t) < 1e-8);
  }
}

TEST_CASE("amplitude of the base shot does not change lambda") {
  const auto P = validate(3, 2.5, 2);
  BallOptions a, b;
  a.initial_value = 1.0;
  b.initial_value = 37.0;
  CHECK(ball_lambda(P, 0.8, a).lambda == doctest::Approx(ball_lambda(P, 0.8, b).lambda).epsilon(1e-9));
}

TEST_CASE("larger balls have smaller eigenvalues") {
  for (const auto& [p, q, N] : matrix()) {
    const auto P = validate(p, q, N);
    double previous = INFINITY;
    for (double R : {0.25, 0.5, 1.0, 1.01, 3.0}) {
      const double lambda = ball_lambda(P, R).lambda;
      CHECK(lambda < previous);
      previous = lambda;
    }
  }
}

TEST_CASE("ball inputs are checked") {
  CHECK_THROWS_AS(ball_lambda(validate(2, 2, 2), 0.0), Error);
  CHECK_THROWS_AS(ball_lambda(validate(2, 2, 2), -1.0), Error);
}
