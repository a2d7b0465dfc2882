#include <doctest.h>

#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "twisted/ball_eigen.hpp"
#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/shape_verify.hpp"

using namespace twisted;
using std::numbers::pi;

TEST_CASE("split radii keep the total volume") {
  for (int N : {2, 3}) {
    const auto P = validate(2, 2, N);
    const double V = resolve_volume(P, 0.0);
    CHECK(V == doctest::Approx(unit_ball_measure(N)));
    for (double theta : {0.4, 0.5, 0.57}) {
      const auto [R1, R2] = split_radii(P, V, theta);
      const double total = unit_ball_measure(N) * (std::pow(R1, N) + std::pow(R2, N));
      CHECK(total == doctest::Approx(V).epsilon(1e-12));
      CHECK(unit_ball_measure(N) * std::pow(R1, N) == doctest::Approx(theta * V).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(split_radii(validate(2, 2, 2), 1.0, 1.0), Error);
}

TEST_CASE("linear sweep: minimum at the equal split, mirror symmetric, continuous") {
  const auto P = validate(2, 2, 2);
  const auto records = sweep_volume(P);
  REQUIRE(records.size() == 33);
  const auto summary = summarize_sweep(records);
  CHECK(summary.failures == 0);
  CHECK(summary.equal_index == 16);
  CHECK(summary.min_at_equal);
  const auto& eq = records[16];
  CHECK(eq.R1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(eq.lambda == doctest::Approx(std::sqrt(2.0) * oracle::bessel_zero(0.0)).epsilon(1e-9));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = records[records.size() - 1 - i];
    CHECK(a.R1 == doctest::Approx(b.R2).epsilon(1e-14));
    CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-9));
    CHECK(a.f1 == doctest::Approx(b.f2).epsilon(1e-7));
    if (i != 16) CHECK(a.lambda > eq.lambda);
    if (i + 1 < records.size()) CHECK(std::abs(records[i + 1].lambda - a.lambda) < 0.05);
  }
  // lambda decreases toward the equal split on each side
  for (std::size_t i = 0; i < 16; ++i) CHECK(records[i + 1].lambda < records[i].lambda);
}

TEST_CASE("optimal split sits at equal radii") {
  using Triple = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Triple>{{2, 2, 2}, {2, 2, 3}, {3, 2.5, 2}}) {
    const auto P = validate(p, q, N);
    const auto opt = find_optimal_split(P);
    CHECK(opt.unimodal);
    CHECK(std::abs(opt.R1 - std::pow(0.5, 1.0 / N)) <= 1e-4);
    CHECK(std::abs(opt.R1 - opt.R2) <= 1e-4);
  }
}

TEST_CASE("flux equality") {
  const auto P = validate(2, 2, 2);
  const double R = std::sqrt(0.5);
  CHECK(check_flux_equality(twisted_structured(TwistedConfig{P, R, R})) <= 1e-8);
  const auto opt = find_optimal_split(P);
  CHECK(check_flux_equality(twisted_structured(TwistedConfig{P, opt.R1, opt.R2})) <= 1e-4);
  CHECK(check_flux_equality(twisted_structured(TwistedConfig{P, 0.6, 0.8})) > 0.1);
}

TEST_CASE("divergence identity") {
  using Triple = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Triple>{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}}) {
    const auto P = validate(p, q, N);
    const double R = std::pow(0.5, 1.0 / N);
    const auto rep = check_divergence_identity(twisted_structured(TwistedConfig{P, R, R}), P);
    CHECK(rep.residual <= 1e-8);
    CHECK(rep.cross_residual <= 1e-6);
  }
  const auto P = validate(2, 2, 2);
  CHECK_THROWS_AS(check_divergence_identity(twisted_structured(TwistedConfig{P, 0.6, 0.8}), P), Error);
}

TEST_CASE("Pohozaev identity on the analytic 3D eigenfunction") {
  const auto grid = RadialGrid::uniform(1.0, 4097, 3);
  std::vector<double> u, du;
  for (double r : grid.nodes()) {
    if (r == 0.0) {
      u.push_back(pi);
      du.push_back(0.0);
    } else {
      u.push_back(std::sin(pi * r) / r);
      du.push_back((pi * r * std::cos(pi * r) - std::sin(pi * r)) / (r * r));
    }
  }
  const RadialProfile profile(grid, u, du);
  const auto rep = pohozaev_residual(profile, validate(2, 2, 3), {pi * pi, 0.0});
  CHECK(rep.residual <= 1e-6);
  // boundary term -(1/2) |dB| f^2 with f = pi
  CHECK(rep.boundary_term == doctest::Approx(-0.5 * 4.0 * pi * pi * pi).epsilon(1e-12));
}

TEST_CASE("Pohozaev identity on computed ball eigenfunctions") {
  using Triple = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Triple>{{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 3, 2}, {1.5, 2, 3},
                                            {3, 2.5, 2}, {2, 3, 3}}) {
    const auto P = validate(p, q, N);
    const auto ball = ball_lambda(P, 1.0);
    CHECK(pohozaev_residual(ball.profile, P, {ball.euler_k, 0.0}).residual <= 1e-6);
    // zero flux would need this coefficient to vanish
    CHECK(pohozaev_flux_free_coefficient(P) < 0.0);
    CHECK(pohozaev_flux_free_coefficient(P) == doctest::Approx(scaling_exponent(P)));
  }
}

TEST_CASE("Hadamard derivative") {
  const auto P = validate(2, 2, 2);
  const double R1 = 0.65;
  const double R2 = std::sqrt(1.0 - R1 * R1);
  const auto rep = hadamard_derivative(P, R1, R2, 1e-3);
  CHECK(rep.relative_gap <= 1e-3);
  // R1 < R2: growing R1 moves toward the equal split and lowers lambda
  CHECK(rep.predicted < 0.0);
  CHECK(rep.finite_difference < 0.0);

  const double Re = std::sqrt(0.5);
  const auto eq = hadamard_derivative(P, Re, Re);
  CHECK(std::abs(eq.predicted) <= 1e-6);
  CHECK(std::abs(eq.finite_difference) <= 1e-6);

  const auto P3 = validate(3, 2, 2);
  const auto V = resolve_volume(P3, 0.0);
  for (double theta : {0.42, 0.45, 0.47}) {
    const auto [a, b] = split_radii(P3, V, theta);
    CHECK(hadamard_derivative(P3, a, b).relative_gap <= 1e-3);
  }
}

TEST_CASE("shape analysis needs dim >= 2") {
  const auto P = validate(2, 2, 1);
  CHECK_THROWS_AS(sweep_volume(P), Error);
  CHECK_THROWS_AS(hadamard_derivative(P, 0.5, 0.5), Error);
}
