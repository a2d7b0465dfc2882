#include "twisted/twisted_eigen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "twisted/direct.hpp"
#include "twisted/errors.hpp"

namespace twisted {

namespace {

using Vec3 = std::array<double, 3>;

struct Shots {
  ShotResult first;
  ShotResult second;
};

struct System {
  const TwistedConfig& cfg;
  double R1;
  double R2;
  bool with_multiplier;

  // x = (log k, m/k, log c2)
  TwistedSeed seed_of(const Vec3& x) const {
    const double k = std::exp(x[0]);
    return {k, with_multiplier ? x[1] * k : 0.0, std::exp(x[2])};
  }

  Shots shots(const TwistedSeed& s) const {
    const double reach = 20.0 * std::max(R1, R2);
    return {shoot(cfg.params, SourceTerm{s.k, s.m}, 1.0, reach, cfg.shoot),
            shoot(cfg.params, SourceTerm{s.k, -s.m}, s.c2, reach, cfg.shoot)};
  }

  Vec3 residual(const Shots& sh) const {
    const double j1 = sh.first.integrals().q_minus_1;
    const double j2 = sh.second.integrals().q_minus_1;
    return {sh.first.first_zero() / R1 - 1.0, sh.second.first_zero() / R2 - 1.0,
            (j1 - j2) / (j1 + j2)};
  }

  std::optional<Vec3> try_residual(const Vec3& x) const {
    try {
      auto r = residual(shots(seed_of(x)));
      for (double v : r) {
        if (!std::isfinite(v)) return std::nullopt;
      }
      return r;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

double norm_inf(const Vec3& v, bool with_multiplier) {
  double n = std::max(std::abs(v[0]), std::abs(v[1]));
  if (with_multiplier) n = std::max(n, std::abs(v[2]));
  return n;
}

// Gaussian elimination with partial pivoting on a 3x3 (or leading 2x2) system.
std::optional<Vec3> solve(std::array<Vec3, 3> a, Vec3 b, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (!(std::abs(a[piv][c]) > 0.0)) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  Vec3 x{0.0, 0.0, 0.0};
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= a[c][j] * x[j];
    x[c] = s / a[c][c];
  }
  return x;
}

// Unknowns used: (log k, log c2) without multiplier, all three otherwise.
std::array<std::size_t, 3> active_unknowns(bool with_multiplier) {
  return with_multiplier ? std::array<std::size_t, 3>{0, 1, 2}
                         : std::array<std::size_t, 3>{0, 2, 1};
}

struct NewtonOutcome {
  Vec3 x;
  Vec3 residual;
  std::size_t iterations;
};

NewtonOutcome newton(const System& sys, Vec3 x) {
  const auto& cfg = sys.cfg;
  const std::size_t n = sys.with_multiplier ? 3 : 2;
  const auto idx = active_unknowns(sys.with_multiplier);
  auto r0 = sys.try_residual(x);
  if (!r0) throw Error(ErrorKind::NewtonDivergence, "shooting failed at the Newton seed");
  Vec3 r = *r0;
  double rn = norm_inf(r, sys.with_multiplier);
  std::size_t it = 0;
  for (; it < cfg.max_newton_iterations && rn > cfg.tol; ++it) {
    // jac[i][j] = d residual_i / d x_{idx[j]}; the first n residuals are active.
    std::array<Vec3, 3> jac{};
    for (std::size_t j = 0; j < n; ++j) {
      Vec3 xp = x;
      double step = 1e-6 * std::max(1.0, std::abs(x[idx[j]]));
      xp[idx[j]] += step;
      auto rp = sys.try_residual(xp);
      if (!rp) {
        step = -step;
        xp[idx[j]] = x[idx[j]] + step;
        rp = sys.try_residual(xp);
        if (!rp) throw Error(ErrorKind::NewtonDivergence, "shooting failed in the Jacobian");
      }
      for (std::size_t i = 0; i < n; ++i) jac[i][j] = ((*rp)[i] - r[i]) / step;
    }
    Vec3 rhs{-r[0], -r[1], -r[2]};
    auto dx = solve(jac, rhs, n);
    if (!dx) throw Error(ErrorKind::NewtonDivergence, "singular Jacobian");
    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= 20; ++halving, t *= 0.5) {
      Vec3 xt = x;
      for (std::size_t j = 0; j < n; ++j) xt[idx[j]] += t * (*dx)[j];
      auto rt = sys.try_residual(xt);
      if (!rt) continue;
      const double rtn = norm_inf(*rt, sys.with_multiplier);
      if (rtn < rn) {
        x = xt;
        r = *rt;
        rn = rtn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(rn <= cfg.tol)) {
    std::ostringstream os;
    os << "residual " << rn << " after " << it << " iterations (R1=" << sys.R1
       << ", R2=" << sys.R2 << ", k=" << std::exp(x[0]) << ", m/k=" << x[1]
       << ", c2=" << std::exp(x[2]) << ")";
    throw Error(ErrorKind::NewtonDivergence, os.str());
  }
  return {x, r, it};
}

Vec3 to_unknowns(const TwistedSeed& s) { return {std::log(s.k), s.m / s.k, std::log(s.c2)}; }

TwistedResult assemble(const TwistedConfig& cfg, const Shots& sh, const TwistedSeed& seed,
                       std::size_t iterations) {
  const auto& P = cfg.params;
  const double p = P.p();
  const double q = P.q();
  const int dim = P.dim();
  const double nw = dim * unit_ball_measure(dim);
  const auto& I1 = sh.first.integrals();
  const auto& I2 = sh.second.integrals();
  const double energy = nw * (I1.grad + I2.grad);
  const double mass = nw * (I1.q + I2.q);
  const double a = std::pow(mass, -1.0 / q);
  const double k_n = seed.k * std::pow(a, p - q);
  const double m_n = seed.m * std::pow(a, p - q + 1.0);

  auto profile1 = sh.first.profile(cfg.profile_nodes).scaled(a);
  auto profile2 = sh.second.profile(cfg.profile_nodes).scaled(a);
  const SourceTerm bare{k_n, 0.0};
  const double euler = std::max(euler_profile_residual(profile1, P, bare),
                                euler_profile_residual(profile2, P, bare));
  const double model = std::max(euler_profile_residual(profile1, P, SourceTerm{k_n, m_n}),
                                euler_profile_residual(profile2, P, SourceTerm{k_n, -m_n}));
  return TwistedResult{
      .R1 = cfg.R1,
      .R2 = cfg.R2,
      .lambda = std::pow(energy, 1.0 / p) / std::pow(mass, 1.0 / q),
      .c1 = a,
      .c2 = a * seed.c2,
      .m = m_n,
      .k = k_n,
      .profile1 = std::move(profile1),
      .profile2 = std::move(profile2),
      .f1 = a * std::abs(sh.first.boundary_slope()),
      .f2 = a * std::abs(sh.second.boundary_slope()),
      .moment1 = nw * std::pow(a, q - 1.0) * I1.q_minus_1,
      .moment2 = nw * std::pow(a, q - 1.0) * I2.q_minus_1,
      .moment_residual = std::abs(I1.q_minus_1 - I2.q_minus_1) / I1.q_minus_1,
      .euler_residual = euler,
      .model_residual = model,
      .iterations = iterations,
      .method = "structured",
      .seed = seed,
  };
}

void check_config(const TwistedConfig& cfg) {
  if (!(cfg.R1 > 0.0) || !(cfg.R2 > 0.0) || !std::isfinite(cfg.R1) || !std::isfinite(cfg.R2)) {
    throw Error(ErrorKind::InvalidArgument, "ball radii must be positive");
  }
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
}

TwistedResult solve_from(const TwistedConfig& cfg, const TwistedSeed& seed,
                         std::size_t prior_iterations) {
  const bool with_multiplier = cfg.params.q() >= 2.0;
  System sys{cfg, cfg.R1, cfg.R2, with_multiplier};
  Vec3 x = to_unknowns(seed);
  if (!with_multiplier) x[1] = 0.0;
  auto out = newton(sys, x);
  if (!with_multiplier && std::abs(out.residual[2]) > cfg.tol) {
    std::ostringstream os;
    os << "q < 2 admits only m = 0, which leaves the moment mismatch at " << out.residual[2];
    throw Error(ErrorKind::MultiplierUnsupported, os.str());
  }
  const auto s = sys.seed_of(out.x);
  return assemble(cfg, sys.shots(s), s, prior_iterations + out.iterations);
}

}  // namespace

TwistedResult twisted_structured(const TwistedConfig& config, const TwistedSeed& seed) {
  check_config(config);
  return solve_from(config, seed, 0);
}

TwistedResult twisted_structured(const TwistedConfig& config) {
  check_config(config);
  const int dim = config.params.dim();
  const double r_eq =
      std::pow(0.5 * (std::pow(config.R1, dim) + std::pow(config.R2, dim)), 1.0 / dim);
  // Exact antisymmetric start: phi(0) = 1 with k = (rho*/R)^p solves the
  // Dirichlet problem on B_R for both pieces.
  const auto base = shoot(config.params, SourceTerm{1.0, 0.0}, 1.0, 1e4, config.shoot);
  TwistedSeed seed{std::pow(base.first_zero() / r_eq, config.params.p()), 0.0, 1.0};
  const bool equal = config.R1 == config.R2;
  const int steps = equal ? 0 : std::max(config.homotopy_steps, 1);
  std::size_t iterations = 0;
  for (int j = 1; j < steps; ++j) {
    const double s = static_cast<double>(j) / steps;
    TwistedConfig stage = config;
    stage.R1 = r_eq + s * (config.R1 - r_eq);
    stage.R2 = r_eq + s * (config.R2 - r_eq);
    stage.profile_nodes = 16;
    auto partial = solve_from(stage, seed, iterations);
    seed = partial.seed;
    iterations = partial.iterations;
  }
  return solve_from(config, seed, iterations);
}

TwistedResult twisted_direct(const TwistedConfig& config, const DirectOptions& options) {
  check_config(config);
  if (options.cells < 64) throw Error(ErrorKind::InvalidArgument, "direct grid needs >= 64 cells");
  const auto& P = config.params;
  direct::Problem problem;
  problem.p = P.p();
  problem.q = P.q();
  problem.signed_moment_constraint = true;
  problem.pieces.push_back(direct::radial_piece(config.R1, options.cells, P.dim(), +1));
  problem.pieces.push_back(direct::radial_piece(config.R2, options.cells, P.dim(), -1));
  std::vector<std::vector<double>> init(2);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& x = problem.pieces[k].nodes;
    const double R = x.back();
    const double sign = k == 0 ? 1.0 : -1.0;
    for (double r : x) init[k].push_back(sign * (1.0 - (r / R) * (r / R)));
  }
  direct::Options dopt;
  dopt.max_iterations = options.max_iterations;
  dopt.stall_tolerance = options.tolerance;
  auto sol = direct::minimize(problem, std::move(init), dopt);
  if (!sol.converged) {
    throw Error(ErrorKind::NonConvergence, "direct two-ball minimization did not converge");
  }
  auto make_profile = [&](std::size_t k) {
    std::vector<double> v = sol.values[k];
    if (k == 1) {
      for (auto& x : v) x = -x;
    }
    return RadialProfile(RadialGrid(problem.pieces[k].nodes, P.dim()), std::move(v));
  };
  auto profile1 = make_profile(0);
  auto profile2 = make_profile(1);
  const double f1 = std::abs(profile1.slopes().back());
  const double f2 = std::abs(profile2.slopes().back());
  auto moment = [&](const RadialProfile& prof) {
    std::vector<double> f(prof.values().begin(), prof.values().end());
    for (auto& v : f) v = std::pow(std::max(v, 0.0), P.q() - 1.0);
    return integrate_radial(prof.grid(), f, P.dim() - 1);
  };
  const double moment1 = moment(profile1);
  const double moment2 = moment(profile2);
  const double c1 = profile1.values().front();
  const double c2 = profile2.values().front();
  return TwistedResult{
      .R1 = config.R1,
      .R2 = config.R2,
      .lambda = sol.lambda,
      .c1 = c1,
      .c2 = c2,
      .m = sol.multiplier,
      .k = std::pow(sol.lambda, P.p()),
      .profile1 = std::move(profile1),
      .profile2 = std::move(profile2),
      .f1 = f1,
      .f2 = f2,
      .moment1 = moment1,
      .moment2 = moment2,
      .moment_residual = sol.moment_residual,
      .euler_residual = sol.zero_multiplier_residual,
      .model_residual = sol.euler_residual,
      .iterations = sol.iterations,
      .method = "direct",
      .seed = {},
  };
}

MultiplierReport multiplier_report(const TwistedResult& result, double multiplier_tolerance,
                                   double residual_tolerance) {
  MultiplierReport rep;
  rep.m = result.m;
  rep.euler_residual = result.euler_residual;
  rep.multiplier_tolerance = multiplier_tolerance;
  rep.residual_tolerance = residual_tolerance;
  rep.pass = std::abs(result.m) <= multiplier_tolerance && result.euler_residual <= residual_tolerance;
  return rep;
}

}  // namespace twisted
