#include "twisted/direct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/math/tools/toms748_solve.hpp>

#include "twisted/errors.hpp"
#include "twisted/quadrature.hpp"

namespace twisted::direct {

namespace {

constexpr std::array<double, 6> kGaussX = {-0.9324695142031521, -0.6612093864662645,
                                           -0.2386191860831969, 0.2386191860831969,
                                           0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussW = {0.1713244923791704, 0.3607615730481386,
                                           0.4679139345726910, 0.4679139345726910,
                                           0.3607615730481386, 0.1713244923791704};

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

struct Eval {
  double energy = 0.0;     // int |u'|^p w
  double mass = 0.0;       // int |u|^q w
  double moment = 0.0;     // int |u|^{q-2} u w
  double pos_moment = 0.0; // int (u^+)^{q-1} w
  Vec d_energy, d_mass, d_moment;
};

class Engine {
 public:
  explicit Engine(const Problem& problem) : pb_(problem) {
    std::size_t off = 0;
    for (const auto& piece : pb_.pieces) {
      if (piece.nodes.size() < 3) throw Error(ErrorKind::InvalidArgument, "piece needs >= 2 cells");
      offsets_.push_back(off);
      off += piece.nodes.size();
    }
    size_ = off;
  }

  std::size_t size() const { return size_; }

  Vec flatten(const std::vector<Vec>& per_piece) const {
    if (per_piece.size() != pb_.pieces.size()) {
      throw Error(ErrorKind::InvalidArgument, "initial guess must have one vector per piece");
    }
    Vec u(size_);
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      if (per_piece[k].size() != pb_.pieces[k].nodes.size()) {
        throw Error(ErrorKind::InvalidArgument, "initial guess must match the piece nodes");
      }
      std::copy(per_piece[k].begin(), per_piece[k].end(), u.begin() + offsets_[k]);
    }
    return u;
  }

  std::vector<Vec> split(const Vec& u) const {
    std::vector<Vec> out;
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      const auto n = pb_.pieces[k].nodes.size();
      out.emplace_back(u.begin() + offsets_[k], u.begin() + offsets_[k] + n);
    }
    return out;
  }

  void project(Vec& u) const {
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      const auto& piece = pb_.pieces[k];
      const auto n = piece.nodes.size();
      double* v = u.data() + offsets_[k];
      if (piece.sign > 0) for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], 0.0);
      if (piece.sign < 0) for (std::size_t i = 0; i < n; ++i) v[i] = std::min(v[i], 0.0);
      if (piece.dirichlet_left) v[0] = 0.0;
      if (piece.dirichlet_right) v[n - 1] = 0.0;
    }
  }

  Eval evaluate(const Vec& u, bool with_gradient) const {
    const double p = pb_.p;
    const double q = pb_.q;
    Eval ev;
    if (with_gradient) {
      ev.d_energy.assign(size_, 0.0);
      ev.d_mass.assign(size_, 0.0);
      ev.d_moment.assign(size_, 0.0);
    }
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      const auto& piece = pb_.pieces[k];
      const auto& x = piece.nodes;
      const std::size_t off = offsets_[k];
      for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double xa = x[j], xb = x[j + 1], h = xb - xa;
        const double ua = u[off + j], ub = u[off + j + 1];
        const double s = (ub - ua) / h;
        const double wint = weight_integral(piece, xa, xb);
        const double as = std::abs(s);
        ev.energy += std::pow(as, p) * wint;
        if (with_gradient && as > 0.0) {
          const double dE = p * std::pow(as, p - 2.0) * s * wint / h;
          ev.d_energy[off + j] -= dE;
          ev.d_energy[off + j + 1] += dE;
        }
        // Zeroth-order terms, split at an interior sign change.
        std::array<double, 3> cuts = {xa, xb, xb};
        std::size_t nsub = 1;
        if ((ua > 0.0 && ub < 0.0) || (ua < 0.0 && ub > 0.0)) {
          cuts[1] = xa + h * ua / (ua - ub);
          cuts[2] = xb;
          nsub = 2;
        }
        for (std::size_t sub = 0; sub < nsub; ++sub) {
          const double a = cuts[sub], b = cuts[sub + 1];
          const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
          for (std::size_t g = 0; g < kGaussX.size(); ++g) {
            const double xi = mid + half * kGaussX[g];
            const double W = half * kGaussW[g] * weight(piece, xi);
            const double phib = (xi - xa) / h, phia = 1.0 - phib;
            const double v = ua * phia + ub * phib;
            const double av = std::abs(v);
            if (av == 0.0) continue;
            const double avq2 = std::pow(av, q - 2.0);
            ev.mass += W * avq2 * av * av;
            ev.moment += W * avq2 * v;
            if (v > 0.0) ev.pos_moment += W * avq2 * v;
            if (with_gradient) {
              const double dm = W * q * avq2 * v;
              const double dc = W * (q - 1.0) * avq2;
              ev.d_mass[off + j] += dm * phia;
              ev.d_mass[off + j + 1] += dm * phib;
              ev.d_moment[off + j] += dc * phia;
              ev.d_moment[off + j + 1] += dc * phib;
            }
          }
        }
      }
    }
    return ev;
  }

  /// Solves P z = r with P the weighted stiffness (p-1)(s^2+delta^2)^{(p-2)/2}
  /// linearized at u, block tridiagonal per piece, Dirichlet rows pinned.
  Vec precondition(const Vec& u, const Vec& r, const std::vector<bool>* held = nullptr) const {
    const double p = pb_.p;
    Vec z(size_, 0.0);
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      const auto& piece = pb_.pieces[k];
      const auto& x = piece.nodes;
      const std::size_t n = x.size(), off = offsets_[k];
      double smax = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        smax = std::max(smax, std::abs((u[off + j + 1] - u[off + j]) / (x[j + 1] - x[j])));
      }
      const double delta = std::max(1e-3 * smax, 1e-12);
      Vec diag(n, 0.0), off_diag(n, 0.0), rhs(n);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const double h = x[j + 1] - x[j];
        const double s = (u[off + j + 1] - u[off + j]) / h;
        const double a = (p - 1.0) * std::pow(s * s + delta * delta, 0.5 * (p - 2.0)) *
                         weight_integral(piece, x[j], x[j + 1]) / (h * h);
        diag[j] += a;
        diag[j + 1] += a;
        off_diag[j] = -a;  // couples j and j+1
      }
      for (std::size_t i = 0; i < n; ++i) rhs[i] = r[off + i];
      auto pin = [&](std::size_t i) {
        diag[i] = 1.0;
        rhs[i] = 0.0;
        if (i > 0) off_diag[i - 1] = 0.0;
        if (i + 1 < n) off_diag[i] = 0.0;
      };
      if (piece.dirichlet_left) pin(0);
      if (piece.dirichlet_right) pin(n - 1);
      if (held) {
        for (std::size_t i = 0; i < n; ++i) {
          if ((*held)[off + i]) pin(i);
        }
      }
      // Thomas algorithm on the symmetric tridiagonal system.
      Vec c(n, 0.0), d(n, 0.0);
      c[0] = off_diag[0] / diag[0];
      d[0] = rhs[0] / diag[0];
      for (std::size_t i = 1; i < n; ++i) {
        const double denom = diag[i] - off_diag[i - 1] * c[i - 1];
        c[i] = (i + 1 < n) ? off_diag[i] / denom : 0.0;
        d[i] = (rhs[i] - off_diag[i - 1] * d[i - 1]) / denom;
      }
      z[off + n - 1] = d[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) z[off + i] = d[i] - c[i] * z[off + i + 1];
    }
    return z;
  }

  /// Rescales the negative part so that the signed moment vanishes, then
  /// normalizes int |u|^q = 1. Returns false if u does not change sign.
  bool retract(Vec& u) const {
    if (pb_.signed_moment_constraint) {
      Vec pos(size_), neg(size_);
      bool has_pos = false, has_neg = false;
      for (std::size_t i = 0; i < size_; ++i) {
        pos[i] = std::max(u[i], 0.0);
        neg[i] = std::max(-u[i], 0.0);
        has_pos |= pos[i] > 0.0;
        has_neg |= neg[i] > 0.0;
      }
      if (!has_pos || !has_neg) return false;
      auto moment_at = [&](double t) {
        Vec v(size_);
        for (std::size_t i = 0; i < size_; ++i) v[i] = pos[i] - t * neg[i];
        return evaluate(v, false).moment;
      };
      const double q = pb_.q;
      const double cp = evaluate(pos, false).moment;
      const double cn = -evaluate(neg, false).moment;
      if (!(cp > 0.0) || !(cn < 0.0 || cn > 0.0)) return false;
      // Exact when every cell keeps one sign; otherwise a starting bracket.
      double t = std::pow(cp / std::abs(cn), 1.0 / (q - 1.0));
      if (!split_cells(u)) {
        double lo = t, hi = t;
        while (moment_at(lo) < 0.0) lo *= 0.5;
        while (moment_at(hi) > 0.0) hi *= 2.0;
        if (lo < hi) {
          std::uintmax_t iters = 200;
          auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::abs(b); };
          auto br = boost::math::tools::toms748_solve(moment_at, lo, hi, stop, iters);
          t = 0.5 * (br.first + br.second);
        }
      }
      for (std::size_t i = 0; i < size_; ++i) u[i] = pos[i] - t * neg[i];
    }
    const double mass = evaluate(u, false).mass;
    if (!(mass > 0.0)) return false;
    const double scale = std::pow(mass, -1.0 / pb_.q);
    for (auto& v : u) v *= scale;
    return true;
  }

  double objective(const Eval& ev) const {
    return std::log(ev.energy) / pb_.p - std::log(ev.mass) / pb_.q;
  }

 private:
  /// False if some cell of u changes sign strictly inside.
  bool split_cells(const Vec& u) const {
    for (std::size_t k = 0; k < pb_.pieces.size(); ++k) {
      const std::size_t n = pb_.pieces[k].nodes.size(), off = offsets_[k];
      for (std::size_t j = 0; j + 1 < n; ++j) {
        if (u[off + j] * u[off + j + 1] < 0.0) return false;
      }
    }
    return true;
  }

  static double weight(const Piece& piece, double x) {
    return piece.weight_power == 0 ? piece.weight_scale
                                   : piece.weight_scale * std::pow(std::abs(x), piece.weight_power);
  }

  static double weight_integral(const Piece& piece, double a, double b) {
    if (piece.weight_power == 0) return piece.weight_scale * (b - a);
    const int e = piece.weight_power + 1;
    // Pieces with a weight power are radial, so 0 <= a < b.
    return piece.weight_scale * (std::pow(b, e) - std::pow(a, e)) / e;
  }

  const Problem& pb_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
};

}  // namespace

Piece radial_piece(double radius, std::size_t cells, int dim, int sign) {
  Piece piece;
  piece.nodes.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    piece.nodes[i] = radius * static_cast<double>(i) / static_cast<double>(cells);
  }
  piece.weight_scale = dim * unit_ball_measure(dim);
  piece.weight_power = dim - 1;
  piece.dirichlet_left = false;
  piece.dirichlet_right = true;
  piece.sign = sign;
  return piece;
}

Piece interval_piece(double a, double b, std::size_t cells) {
  Piece piece;
  piece.nodes.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    piece.nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  piece.dirichlet_left = true;
  piece.dirichlet_right = true;
  return piece;
}

Solution minimize(const Problem& problem, std::vector<std::vector<double>> initial,
                  const Options& options) {
  Engine engine(problem);
  Vec u = engine.flatten(initial);
  engine.project(u);
  if (!engine.retract(u)) {
    throw Error(ErrorKind::InvalidArgument,
                problem.signed_moment_constraint ? "initial guess must change sign"
                                                 : "initial guess must be nonzero");
  }
  const double p = problem.p;
  const double q = problem.q;

  Eval ev = engine.evaluate(u, true);
  double f = engine.objective(ev);
  double step = 1.0;
  std::size_t stalled = 0;
  Solution sol;
  double mu = 0.0;
  double grad_norm = 0.0;
  Vec g(u.size());

  auto gradient = [&](const Eval& e) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      g[i] = e.d_energy[i] / (p * e.energy) - e.d_mass[i] / (q * e.mass);
    }
  };

  for (sol.iterations = 0; sol.iterations < options.max_iterations; ++sol.iterations) {
    gradient(ev);
    Vec pg = engine.precondition(u, g);
    mu = 0.0;
    Vec d(u.size());
    if (problem.signed_moment_constraint) {
      Vec pc = engine.precondition(u, ev.d_moment);
      const double cc = dot(ev.d_moment, pc);
      mu = cc > 0.0 ? dot(ev.d_moment, pg) / cc : 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) d[i] = -(pg[i] - mu * pc[i]);
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) d[i] = -pg[i];
    }
    const double slope = dot(g, d);
    grad_norm = std::sqrt(std::max(0.0, -slope));
    if (grad_norm < options.gradient_tolerance) {
      sol.converged = true;
      break;
    }

    Vec cand(u.size());
    double trial_step = 0.0;
    auto line_search = [&](const Vec& dir, double dir_slope) {
      trial_step = std::min(2.0 * step, 4.0);
      for (int bt = 0; bt < 50; ++bt, trial_step *= 0.5) {
        for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] + trial_step * dir[i];
        engine.project(cand);
        if (!engine.retract(cand)) continue;
        const double fc = engine.objective(engine.evaluate(cand, false));
        if (std::isfinite(fc) && fc <= f + 1e-4 * trial_step * dir_slope) return true;
      }
      return false;
    };
    bool accepted = line_search(d, slope);
    if (!accepted && problem.q < 2.0 && problem.signed_moment_constraint) {
      // For q < 2 the moment grows like |u|^{q-1} off a node sitting at zero,
      // so any step that lifts such a node fails. Retry with those nodes held.
      std::vector<bool> held(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) held[i] = u[i] == 0.0;
      Vec gh = g, ch = ev.d_moment;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (held[i]) gh[i] = ch[i] = 0.0;
      }
      const Vec pgh = engine.precondition(u, gh, &held);
      const Vec pch = engine.precondition(u, ch, &held);
      const double cc = dot(ch, pch);
      const double muh = cc > 0.0 ? dot(ch, pgh) / cc : 0.0;
      Vec dh(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) dh[i] = -(pgh[i] - muh * pch[i]);
      const double held_slope = dot(g, dh);
      if (held_slope < 0.0) accepted = line_search(dh, held_slope);
    }
    if (!accepted) {
      sol.converged = grad_norm < 1e3 * options.gradient_tolerance || stalled > 0;
      break;
    }
    step = trial_step;
    u = cand;
    ev = engine.evaluate(u, true);
    const double fn = engine.objective(ev);
    stalled = (f - fn <= options.stall_tolerance * std::max(1.0, std::abs(f))) ? stalled + 1 : 0;
    f = fn;
    if (stalled >= 10) {
      sol.converged = true;
      break;
    }
  }

  // Final diagnostics at the returned iterate (mass normalized to 1).
  ev = engine.evaluate(u, true);
  gradient(ev);
  Vec pg = engine.precondition(u, g);
  Vec qhalf(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) qhalf[i] = ev.d_mass[i] / (q * ev.mass);
  const double ref = std::sqrt(std::max(dot(qhalf, engine.precondition(u, qhalf)), 1e-300));
  const double lambda_p = ev.energy / std::pow(ev.mass, p / q);
  sol.lambda = std::pow(lambda_p, 1.0 / p);
  sol.zero_multiplier_residual = std::sqrt(std::max(0.0, dot(g, pg))) / ref;
  if (problem.signed_moment_constraint) {
    Vec pc = engine.precondition(u, ev.d_moment);
    const double cc = dot(ev.d_moment, pc);
    mu = cc > 0.0 ? dot(ev.d_moment, pg) / cc : 0.0;
    Vec r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = g[i] - mu * ev.d_moment[i];
    sol.euler_residual = std::sqrt(std::max(0.0, dot(r, engine.precondition(u, r)))) / ref;
    sol.multiplier = lambda_p * mu;
    sol.moment_residual = std::abs(ev.moment) / ev.pos_moment;
  } else {
    sol.euler_residual = sol.zero_multiplier_residual;
  }
  sol.values = engine.split(u);
  return sol;
}

}  // namespace twisted::direct
