#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/shooting.hpp"

using namespace twisted;
using std::numbers::pi;

TEST_CASE("linear shots match cos r and sin(r)/r") {
  const auto s1 = shoot(validate(2, 2, 1), {1.0, 0.0}, 1.0, 10.0);
  CHECK(s1.first_zero() == doctest::Approx(pi / 2).epsilon(1e-11));
  CHECK(s1.boundary_slope() == doctest::Approx(-1.0).epsilon(1e-9));
  for (double r : {0.1, 0.7, 1.3}) CHECK(s1.phi(r) == doctest::Approx(std::cos(r)).epsilon(1e-9));

  const auto s3 = shoot(validate(2, 2, 3), {1.0, 0.0}, 1.0, 10.0);
  CHECK(s3.first_zero() == doctest::Approx(pi).epsilon(1e-11));
  CHECK(s3.boundary_slope() == doctest::Approx(-1.0 / pi).epsilon(1e-9));
  for (double r : {0.05, 1.0, 2.5}) CHECK(s3.phi(r) == doctest::Approx(std::sin(r) / r).epsilon(1e-9));

  const auto s5 = shoot(validate(2, 2, 1), {1.0, 0.0}, 5.0, 10.0);
  CHECK(s5.first_zero() == doctest::Approx(pi / 2).epsilon(1e-11));
}

TEST_CASE("shoot errors") {
  const auto P = validate(2, 2, 2);
  CHECK_THROWS_AS(shoot(P, {1.0, 0.0}, 0.0, 10.0), Error);
  CHECK_THROWS_AS(shoot(P, {1.0, 0.0}, 1.0, 1.0), Error);  // j01 > 1: no zero yet
  try {
    shoot(validate(2, 1.5, 2), {1.0, 0.3}, 1.0, 10.0);
    FAIL("expected SingularSource");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularSource);
  }
}

TEST_CASE("rescale_shot examples") {
  const auto P1 = validate(2, 2, 1);
  const auto base = shoot(P1, {1.0, 0.0}, 1.0, 10.0);
  const auto same = rescale_shot(base, P1, 1.0, 1.0);
  CHECK(same.first_zero() == base.first_zero());
  CHECK(same.source().k == base.source().k);

  const auto twice = rescale_shot(base, P1, 1.0, 2.0);
  CHECK(twice.first_zero() == base.first_zero() / 2.0);
  CHECK(twice.source().k == doctest::Approx(4.0));
  CHECK(twice.phi(0.3) == doctest::Approx(std::cos(0.6)).epsilon(1e-9));

  const auto P2 = validate(3, 2, 2);
  const auto b2 = shoot(P2, {1.0, 0.0}, 1.0, 50.0);
  const auto a2 = rescale_shot(b2, P2, 2.0, 1.0);
  CHECK(a2.source().k == doctest::Approx(2.0));
  CHECK(a2.first_zero() == b2.first_zero());

  const auto with_m = shoot(validate(2, 3, 2), {1.0, 0.2}, 1.0, 50.0);
  CHECK_THROWS_AS(rescale_shot(with_m, validate(2, 3, 2), 2.0, 1.0), Error);
}

TEST_CASE("first zero of a rescaled shot is rho / B exactly") {
  const auto P = validate(2.5, 3.1, 3);
  const auto base = shoot(P, {1.0, 0.0}, 1.0, 100.0);
  for (double B : {0.3, 1.7, 12.0}) {
    CHECK(rescale_shot(base, P, 0.8, B).first_zero() == base.first_zero() / B);
  }
}

TEST_CASE("momentum agrees with the integrated source") {
  using Case = std::tuple<double, double, int, double>;
  for (auto [p, q, N, m] : std::vector<Case>{{2.0, 2.0, 2, 0.0}, {3.0, 2.5, 2, 0.4},
                                             {1.5, 2.0, 3, 0.0}, {4.0, 3.0, 1, 0.1}}) {
    const auto P = validate(p, q, N);
    const SourceTerm src{1.0, m};
    const auto shot = shoot(P, src, 1.0, 100.0);
    const double r_end = 0.9 * shot.first_zero();
    auto grid = RadialGrid::uniform(r_end, 4001, N);
    std::vector<double> integrand;
    for (double r : grid.nodes()) integrand.push_back(std::pow(r, N - 1) * src(shot.phi(r), q));
    const double expected = -simpson(grid.nodes(), integrand);
    CHECK(shot.momentum(r_end) == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("energy identity of the base shot") {
  using Case = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Case>{{2.0, 2.0, 2}, {3.0, 2.0, 2}, {2.0, 3.0, 2},
                                          {1.5, 2.0, 3}, {3.0, 2.5, 2}, {4.0, 4.0, 1}}) {
    const auto shot = shoot(validate(p, q, N), {1.0, 0.0}, 1.0, 1e4);
    const auto& I = shot.integrals();
    CHECK(std::abs(I.grad - I.q) / I.q < 1e-9);
  }
}

TEST_CASE("the first zero tracks the integration tolerance") {
  const auto P = validate(3, 2.5, 2);
  ShootOptions coarse;
  coarse.tolerances = {1e-6, 1e-8};
  ShootOptions fine = coarse;
  fine.tolerances = {1e-7, 1e-9};
  ShootOptions reference;
  reference.tolerances = {1e-13, 1e-15};
  const double rho = shoot(P, {1.0, 0.0}, 1.0, 100.0, reference).first_zero();
  const double e1 = std::abs(shoot(P, {1.0, 0.0}, 1.0, 100.0, coarse).first_zero() - rho);
  const double e2 = std::abs(shoot(P, {1.0, 0.0}, 1.0, 100.0, fine).first_zero() - rho);
  CHECK(e1 < 1e-5 * rho);
  CHECK(e2 < 1e-6 * rho);
}

TEST_CASE("comparison examples") {
  CHECK(check_comparison(validate(2, 2, 1), 1.0, 2.0, pi / 2).pass);
  CHECK(check_comparison(validate(3, 2, 3), 1.0, 1.1, 1e6).pass);
  CHECK(check_comparison(validate(2, 3, 2), 0.5, 1.0, 2.0).pass);
  CHECK_THROWS_AS(check_comparison(validate(2, 2, 2), 2.0, 1.0, 1.0), Error);
}

TEST_CASE("ordering holds for q <= p over the whole positivity range") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const int N = 2 + static_cast<int>(unit(rng) * 2);
    const double p = 1.5 + 2.5 * unit(rng);
    const double q = 1.1 + (p - 1.1) * unit(rng);
    const double c1 = 0.2 + 2.0 * unit(rng);
    const double c2 = c1 * (1.01 + unit(rng));
    const auto rep = check_comparison(validate(p, q, N), c1, c2, 1e6);
    CHECK_MESSAGE(rep.pass, "p=" << p << " q=" << q << " N=" << N << " max=" << rep.max_difference);
  }
}

TEST_CASE("ordering fails for q > p once the larger start has dropped below the smaller") {
  // phi_c(r) = c phi_1(c^{(q-p)/p} r): for q > p the taller solution reaches
  // zero first, so the two graphs must cross inside the common domain.
  const auto P = validate(2, 3, 2);
  const auto rep = check_comparison(P, 0.5, 1.0, 1e6);
  CHECK_FALSE(rep.pass);
  CHECK(rep.first_zero_2 < rep.first_zero_1);
  CHECK(rep.argmax > 2.1);
  CHECK(rep.argmax <= rep.first_zero_2);
  const auto s1 = shoot(P, {1.0, 0.0}, 0.5, 1e3);
  const auto s2 = shoot(P, {1.0, 0.0}, 1.0, 1e3);
  CHECK(s1.phi(2.5) > s2.phi(2.5));
}
