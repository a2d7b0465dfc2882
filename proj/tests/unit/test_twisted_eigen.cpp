#include <doctest.h>

#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "twisted/ball_eigen.hpp"
#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/twisted_eigen.hpp"

using namespace twisted;
using std::numbers::pi;

namespace {

double equal_radius(int N) { return std::pow(0.5, 1.0 / N); }

}  // namespace

TEST_CASE("equal balls of total volume omega_N") {
  const double R2d = equal_radius(2);
  const auto t2 = twisted_structured(TwistedConfig{validate(2, 2, 2), R2d, R2d});
  CHECK(t2.lambda == doctest::Approx(std::sqrt(2.0) * oracle::bessel_zero(0.0)).epsilon(1e-9));
  CHECK(t2.lambda == doctest::Approx(3.40092).epsilon(1e-5));
  CHECK(std::abs(t2.m) < 1e-10);
  CHECK(t2.c1 == doctest::Approx(t2.c2).epsilon(1e-10));

  const double R3d = equal_radius(3);
  const auto t3 = twisted_structured(TwistedConfig{validate(2, 2, 3), R3d, R3d});
  CHECK(t3.lambda == doctest::Approx(std::cbrt(2.0) * pi).epsilon(1e-9));
  CHECK(t3.lambda == doctest::Approx(3.9578).epsilon(1e-4));
}

TEST_CASE("equal pair identity lambda = 2^{1/p - 1/q} Lambda(B_R)") {
  using Triple = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Triple>{{3, 2, 2}, {2, 3, 2}, {1.5, 2, 3}, {3, 2.5, 2}, {3, 1.5, 2}}) {
    const auto P = validate(p, q, N);
    for (double R : {0.4, 1.0}) {
      const auto t = twisted_structured(TwistedConfig{P, R, R});
      const double expected = std::pow(2.0, 1.0 / p - 1.0 / q) * ball_lambda(P, R).lambda;
      CHECK_MESSAGE(t.lambda == doctest::Approx(expected).epsilon(1e-8), "p=" << p << " q=" << q);
      CHECK(std::abs(t.m) <= 1e-10);
      CHECK(std::abs(t.c1 - t.c2) <= 1e-10 * t.c1);
      CHECK(t.moment_residual <= 1e-8);
      CHECK(multiplier_report(t).pass);
    }
  }
}

TEST_CASE("unequal radii (0.6, 0.8) against the direct minimizer") {
  TwistedConfig cfg{validate(2, 2, 2), 0.6, 0.8};
  const auto s = twisted_structured(cfg);
  const auto d = twisted_direct(cfg);
  CHECK(std::abs(s.lambda - d.lambda) / s.lambda < 1e-3);
  CHECK(s.lambda == doctest::Approx(3.6703697765).epsilon(1e-9));
  // The moment constraint cannot hold with m = 0 here; both solvers see the same multiplier.
  CHECK(s.m == doctest::Approx(d.m).epsilon(1e-4));
  CHECK(s.m > 2.0);
  CHECK(s.moment_residual <= 1e-8);
  CHECK(d.moment_residual <= 1e-6);
  CHECK(s.model_residual <= 1e-6);

  const auto report = multiplier_report(s);
  CHECK(report.m == s.m);
  CHECK_FALSE(report.pass);
  CHECK(report.euler_residual > 1e-6);
}

TEST_CASE("nonlinear unequal radii against the direct minimizer") {
  using Triple = std::tuple<double, double, int>;
  for (auto [p, q, N] : std::vector<Triple>{{3, 2, 2}, {2, 3, 2}, {2, 2, 3}}) {
    const double Re = equal_radius(N);
    TwistedConfig cfg{validate(p, q, N), 0.95 * Re, std::pow(1.0 - std::pow(0.95, N) * 0.5, 1.0 / N)};
    const auto s = twisted_structured(cfg);
    const auto d = twisted_direct(cfg);
    CHECK_MESSAGE(std::abs(s.lambda - d.lambda) / s.lambda < 1e-3, "p=" << p << " q=" << q << " N=" << N);
    CHECK(s.moment_residual <= 1e-8);
    CHECK(d.moment_residual <= 1e-6);
  }
}

TEST_CASE("the multiplier vanishes on unequal radii when p(q-1)/(q-p) = N") {
  // (1.5, 2, 3): the moment balance is invariant under the amplitude/dilation family.
  TwistedConfig cfg{validate(1.5, 2, 3), 0.75, 0.82};
  const auto s = twisted_structured(cfg);
  CHECK(std::abs(s.m) < 1e-8);
  CHECK(multiplier_report(s).pass);
}

TEST_CASE("swapping the radii swaps the pieces") {
  const auto P = validate(3, 2.5, 2);
  const auto a = twisted_structured(TwistedConfig{P, 0.66, 0.74});
  const auto b = twisted_structured(TwistedConfig{P, 0.74, 0.66});
  CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-9));
  CHECK(a.c1 == doctest::Approx(b.c2).epsilon(1e-7));
  CHECK(a.c2 == doctest::Approx(b.c1).epsilon(1e-7));
  CHECK(a.f1 == doctest::Approx(b.f2).epsilon(1e-7));
  CHECK(a.m == doctest::Approx(-b.m).epsilon(1e-6));
}

TEST_CASE("profiles are positive inside and vanish on the boundary") {
  const auto t = twisted_structured(TwistedConfig{validate(2, 3, 2), 0.68, 0.73});
  for (const auto* prof : {&t.profile1, &t.profile2}) {
    const auto v = prof->values();
    CHECK(v.back() == doctest::Approx(0.0));
    for (std::size_t i = 0; i + 1 < v.size(); ++i) CHECK(v[i] > 0.0);
  }
  CHECK(t.profile1.grid().radius() == doctest::Approx(0.68));
  CHECK(t.profile2.grid().radius() == doctest::Approx(0.73));
  const double total = std::pow(lq_norm(t.profile1, 3), 3) + std::pow(lq_norm(t.profile2, 3), 3);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("a shrinking second ball drives lambda up") {
  const auto P = validate(2, 2, 2);
  double previous = 0.0;
  for (double R2 : {0.5, 0.3, 0.15}) {
    const double lambda = twisted_direct(TwistedConfig{P, 0.8, R2}).lambda;
    CHECK(lambda > previous);
    previous = lambda;
  }
  CHECK(previous > 10.0);
}

TEST_CASE("q < 2 only supports the zero-multiplier branch") {
  const auto P = validate(3, 1.5, 2);
  try {
    twisted_structured(TwistedConfig{P, 0.65, 0.75});
    FAIL("expected MultiplierUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultiplierUnsupported);
  }
  const auto d = twisted_direct(TwistedConfig{P, 0.65, 0.75});
  CHECK(d.moment_residual <= 1e-6);
}

TEST_CASE("twisted inputs are checked") {
  const auto P = validate(2, 2, 2);
  CHECK_THROWS_AS(twisted_structured(TwistedConfig{P, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(twisted_structured(TwistedConfig{P, 1.0, -1.0}), Error);
}
