#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "twisted/errors.hpp"
#include "twisted/params.hpp"
#include "twisted/quadrature.hpp"
#include "twisted/rearrange.hpp"

using namespace twisted;

namespace {

SampledFunction unit_weights(std::vector<double> values) {
  SampledFunction f;
  f.weights.assign(values.size(), 1.0);
  f.values = std::move(values);
  return f;
}

}  // namespace

TEST_CASE("decreasing rearrangement examples") {
  CHECK(decreasing_rearrangement(unit_weights({1, 3, 2})).values == std::vector<double>{3, 2, 1});
  CHECK(decreasing_rearrangement(unit_weights({5, 4, 4, 0})).values == std::vector<double>{5, 4, 4, 0});
  CHECK(decreasing_rearrangement(unit_weights({2, 2, 2})).values == std::vector<double>{2, 2, 2});

  SampledFunction f{{1.0, 3.0, 2.0}, {0.5, 0.25, 2.0}, DomainTag::Interval};
  const auto g = decreasing_rearrangement(f);
  CHECK(g.weights == std::vector<double>{0.25, 2.0, 0.5});
  CHECK(decreasing_rearrangement(g).values == g.values);  // idempotent

  CHECK_THROWS_AS(decreasing_rearrangement(unit_weights({1, -1})), Error);
  CHECK_THROWS_AS(decreasing_rearrangement(SampledFunction{{1.0}, {0.0}, DomainTag::Interval}), Error);
}

TEST_CASE("annulus radii fill the ball") {
  SampledFunction f{{3, 2, 1}, {1.0, 1.0, std::numbers::pi - 2.0}, DomainTag::Ball};
  const auto r = annulus_radii(decreasing_rearrangement(f), 2);
  REQUIRE(r.size() == 3);
  CHECK(r.back() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::numbers::pi * r[0] * r[0] == doctest::Approx(1.0));
}

TEST_CASE("equimeasurability is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    SampledFunction f;
    for (int j = 0; j < 97; ++j) {
      f.values.push_back(std::floor(unit(rng) * 16.0) / 4.0);  // ties
      f.weights.push_back(0.05 + unit(rng));
    }
    for (double a : {1.0, 1.7, 2.0, 2.7}) {
      double scale = 0.0;
      for (std::size_t j = 0; j < f.values.size(); ++j) scale += f.weights[j] * std::pow(f.values[j], a);
      CHECK(check_equimeasurable(f, a) <= 1e-15 * scale);
    }
  }
}

TEST_CASE("piecewise-linear integrals are exact") {
  PiecewiseLinear tent{{0, 1, 2}, {0, 1, 0}};
  CHECK(pl_energy(tent, 2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pl_power_integral(tent, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  PiecewiseLinear wave{{0, 1, 2, 3}, {0, 1, -1, 0}};
  CHECK(pl_power_integral(wave, 3, true) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pl_power_integral(wave, 1) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("Polya-Szego examples") {
  const auto sym = polya_szego_check_1d({{0, 1, 2}, {0, 1, 0}}, 2);
  CHECK(sym.holds);
  CHECK(sym.rearranged_energy == doctest::Approx(sym.energy).epsilon(1e-14));

  // peak at 1/2 on [0, 2]: energy 2 + 2/3 against 2 for the symmetric tent
  const auto skew = polya_szego_check_1d({{0, 0.5, 2}, {0, 1, 0}}, 2);
  CHECK(skew.energy == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(skew.rearranged_energy == doctest::Approx(2.0).epsilon(1e-14));

  const auto bumps = polya_szego_check_1d({{0, 1, 2, 3, 4}, {0, 1, 0, 1, 0}}, 2);
  CHECK(bumps.rearranged_energy < bumps.energy - 1e-6);

  CHECK_THROWS_AS(polya_szego_check_1d({{0, 1, 2}, {0, 1, 0.2}}, 2), Error);
  CHECK_THROWS_AS(polya_szego_check_1d({{0, 1, 2}, {0, -1, 0}}, 2), Error);
}

TEST_CASE("Polya-Szego on random piecewise-linear functions") {
  std::mt19937_64 rng(0);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int i = 0; i < 1000; ++i) {
      const auto f = random_piecewise_linear(rng);
      const auto rep = polya_szego_check_1d(f, p);
      CHECK(rep.holds);
      // the rearrangement keeps every power integral; f = 0 rearranges to nothing
      const double mass = pl_power_integral(f, 2.0);
      if (mass == 0.0) continue;
      CHECK(pl_power_integral(rep.rearranged, 2.0) == doctest::Approx(mass).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-ball reduction demo") {
  const auto P = validate(2, 2, 1);
  // antisymmetric tents on two equal intervals: already rearranged
  const std::vector<PiecewiseLinear> anti{{{0, 1, 2}, {0, 1, 0}}, {{3, 4, 5}, {0, -1, 0}}};
  const auto same = two_ball_reduction_demo(anti, P);
  CHECK(same.quotient_after == doctest::Approx(same.quotient_before).epsilon(1e-14));
  CHECK(same.moment_before == doctest::Approx(0.0).epsilon(1e-15));

  const std::vector<PiecewiseLinear> skew{{{0, 0.4, 2}, {0, 1, 0}}, {{3, 4, 5}, {0, -1, 0}}};
  const auto better = two_ball_reduction_demo(skew, P);
  CHECK(better.quotient_after < better.quotient_before * (1.0 - 1e-6));
  CHECK(better.moment_after == doctest::Approx(better.moment_before).epsilon(1e-14));
  CHECK(better.positive_measure == doctest::Approx(2.0));
  CHECK(better.negative_measure == doctest::Approx(2.0));

  CHECK_THROWS_AS(two_ball_reduction_demo({{{0, 1, 2}, {0, 1, 0}}}, P), Error);
  CHECK_THROWS_AS(two_ball_reduction_demo(anti, validate(2, 2, 2)), Error);
}

TEST_CASE("two-ball reduction never increases the quotient") {
  std::mt19937_64 rng(1);
  for (double q : {1.5, 2.0, 3.0}) {
    const auto P = validate(2.5, q, 1);
    int done = 0;
    while (done < 200) {
      std::vector<PiecewiseLinear> parts{random_piecewise_linear(rng, 12, true),
                                         random_piecewise_linear(rng, 12, true)};
      try {
        const auto rep = two_ball_reduction_demo(parts, P);
        CHECK(rep.non_increasing);
        CHECK(std::abs(rep.moment_after - rep.moment_before) <=
              1e-13 * (pl_power_integral(parts[0], q) + pl_power_integral(parts[1], q)));
        ++done;
      } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::NoSignChange);
      }
    }
  }
}
