#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"

using namespace twisted;
using std::numbers::pi;

namespace {

RadialProfile sample(double R, std::size_t n, int dim, double (*f)(double)) {
  auto grid = RadialGrid::uniform(R, n, dim);
  std::vector<double> v;
  for (double r : grid.nodes()) v.push_back(f(r));
  return RadialProfile(grid, v);
}

}  // namespace

TEST_CASE("unit ball measure and sphere area") {
  CHECK(unit_ball_measure(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_measure(2) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(unit_ball_measure(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(sphere_area(1, 0.3) == doctest::Approx(2.0));
  CHECK(sphere_area(2, 2.0) == doctest::Approx(4.0 * pi));
  CHECK(sphere_area(3, 1.0) == doctest::Approx(4.0 * pi));
}

TEST_CASE("grids reject malformed node sets") {
  CHECK_THROWS_AS(RadialGrid::uniform(1.0, 15, 2), Error);
  CHECK_THROWS_AS(RadialGrid(std::vector<double>(20, 0.0), 2), Error);
  auto nodes = RadialGrid::uniform(1.0, 20, 2).nodes();
  std::vector<double> shifted(nodes.begin(), nodes.end());
  shifted[0] = 0.01;
  CHECK_THROWS_AS(RadialGrid(shifted, 2), Error);
  auto grid = RadialGrid::uniform(1.0, 20, 2);
  CHECK_THROWS_AS(RadialProfile(grid, std::vector<double>(19, 1.0)), Error);
  std::vector<double> bad(20, 1.0);
  bad[3] = NAN;
  CHECK_THROWS_AS(RadialProfile(grid, bad), Error);
}

TEST_CASE("integrate_radial examples") {
  auto one = [](double) { return 1.0; };
  CHECK(integrate_radial(sample(1.7, 33, 2, one)) == doctest::Approx(pi * 1.7 * 1.7).epsilon(1e-13));
  CHECK(integrate_radial(sample(1.0, 33, 3, one)) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
  CHECK(integrate_radial(sample(1.0, 17, 1, [](double r) { return r; })) ==
        doctest::Approx(1.0).epsilon(1e-13));
  // odd cell count uses the end correction and is still exact on quadratics
  CHECK(integrate_radial(sample(1.0, 18, 2, [](double r) { return r; })) ==
        doctest::Approx(2.0 * pi / 3.0).epsilon(1e-12));
}

TEST_CASE("norm and moment examples") {
  CHECK(lq_norm(sample(1.0, 65, 2, [](double) { return 1.0; }), 2.0) ==
        doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK(lq_norm(sample(1.0, 65, 3, [](double) { return -2.5; }), 3.0) ==
        doctest::Approx(2.5 * std::cbrt(4.0 * pi / 3.0)).epsilon(1e-13));
  CHECK(lq_norm(sample(1.0, 65, 1, [](double r) { return 1.0 - r; }), 2.0) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-13));

  CHECK(grad_lp_seminorm(sample(1.0, 65, 2, [](double) { return 3.0; }), 2.0) == 0.0);
  CHECK(grad_lp_seminorm(sample(1.0, 65, 1, [](double r) { return 1.0 - r; }), 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(grad_lp_seminorm(sample(1.0, 257, 2, [](double r) { return 1.0 - r * r; }), 2.0) ==
        doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-5));

  CHECK(signed_q_moment(sample(1.0, 65, 2, [](double) { return 0.0; }), 3.0) == 0.0);
  CHECK(signed_q_moment(sample(1.0, 65, 2, [](double) { return 1.0; }), 2.7) ==
        doctest::Approx(pi).epsilon(1e-13));
  CHECK(signed_q_moment(sample(1.0, 65, 2, [](double) { return -1.0; }), 3.0) ==
        doctest::Approx(-pi).epsilon(1e-13));
}

TEST_CASE("homogeneity and oddness") {
  auto u = sample(1.3, 129, 3, [](double r) { return std::cos(r) - 0.2 * r * r; });
  for (double t : {-3.0, 0.5, 7.0}) {
    const auto ut = u.scaled(t);
    CHECK(lq_norm(ut, 2.5) == doctest::Approx(std::abs(t) * lq_norm(u, 2.5)).epsilon(1e-14));
    CHECK(grad_lp_seminorm(ut, 3.0) ==
          doctest::Approx(std::abs(t) * grad_lp_seminorm(u, 3.0)).epsilon(1e-14));
  }
  CHECK(signed_q_moment(u.negated(), 2.5) == doctest::Approx(-signed_q_moment(u, 2.5)).epsilon(1e-15));
}

TEST_CASE("Simpson converges at least at second order") {
  auto f = [](double r) { return std::exp(-r) * std::cos(3.0 * r); };
  // exact int_0^2 e^{-r} cos(3r) r dr for N = 2 times 2 pi
  const double a = -1.0, b = 3.0, L = 2.0;
  auto antider = [&](double r) {
    const double d = a * a + b * b;
    const double e = std::exp(a * r);
    const double c = std::cos(b * r), s = std::sin(b * r);
    return e * ((a * c + b * s) / d * r - ((a * a - b * b) * c + 2 * a * b * s) / (d * d));
  };
  const double exact = 2.0 * pi * (antider(L) - antider(0.0));
  double previous = 0.0;
  for (std::size_t n : {17, 33, 65, 129}) {
    auto grid = RadialGrid::uniform(L, n, 2);
    std::vector<double> v;
    for (double r : grid.nodes()) v.push_back(f(r));
    const double err = std::abs(integrate_radial(grid, v, 1) - exact);
    if (previous > 0.0 && err > 1e-14) CHECK(previous / err > 4.0);
    previous = err;
  }
}

TEST_CASE("finite differences are exact on quadratics") {
  std::vector<double> x{0.0, 0.1, 0.25, 0.3, 0.6, 1.0};
  std::vector<double> f;
  for (double t : x) f.push_back(2.0 * t * t - t + 1.0);
  const auto d = finite_difference(x, f);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(4.0 * x[i] - 1.0));
}
