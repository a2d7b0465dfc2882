#include "twisted/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "twisted/errors.hpp"

namespace twisted {

double unit_ball_measure(int dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  const double half = 0.5 * dim;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double sphere_area(int dim, double radius) {
  return dim * unit_ball_measure(dim) * std::pow(radius, dim - 1);
}

RadialGrid::RadialGrid(std::vector<double> nodes, int dim) : nodes_(std::move(nodes)), dim_(dim) {
  if (dim_ < 1) throw Error(ErrorKind::InvalidArgument, "grid dimension must be >= 1");
  if (nodes_.size() < 16) throw Error(ErrorKind::InvalidArgument, "grid needs >= 16 nodes");
  if (nodes_.front() != 0.0) throw Error(ErrorKind::InvalidArgument, "grid must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "grid nodes must be strictly increasing");
    }
  }
}

RadialGrid RadialGrid::uniform(double radius, std::size_t node_count, int dim) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (node_count < 16) throw Error(ErrorKind::InvalidArgument, "grid needs >= 16 nodes");
  std::vector<double> nodes(node_count);
  const double h = radius / static_cast<double>(node_count - 1);
  for (std::size_t i = 0; i < node_count; ++i) nodes[i] = h * static_cast<double>(i);
  nodes.back() = radius;
  return RadialGrid(std::move(nodes), dim);
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values,
                             std::optional<std::vector<double>> slopes)
    : grid_(std::move(grid)), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::InvalidArgument, "profile values must match the grid");
  }
  if (slopes_ && slopes_->size() != grid_.size()) {
    throw Error(ErrorKind::InvalidArgument, "profile slopes must match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "profile values must be finite");
  }
}

std::vector<double> RadialProfile::slopes() const {
  if (slopes_) return *slopes_;
  return finite_difference(grid_.nodes(), values_);
}

RadialProfile RadialProfile::scaled(double factor) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= factor;
  std::optional<std::vector<double>> s;
  if (slopes_) {
    s = *slopes_;
    for (auto& x : *s) x *= factor;
  }
  return RadialProfile(grid_, std::move(v), std::move(s));
}

std::vector<double> finite_difference(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
    return d;
  }
  // Derivative of the quadratic through (x0, x1, x2) evaluated at `at`.
  auto quad_slope = [](double x0, double x1, double x2, double f0, double f1, double f2,
                       double at) {
    const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    return f0 * l0 + f1 * l1 + f2 * l2;
  };
  d[0] = quad_slope(x[0], x[1], x[2], f[0], f[1], f[2], x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = quad_slope(x[i - 1], x[i], x[i + 1], f[i - 1], f[i], f[i + 1], x[i]);
  }
  d[n - 1] = quad_slope(x[n - 3], x[n - 2], x[n - 1], f[n - 3], f[n - 2], f[n - 1], x[n - 1]);
  return d;
}

double simpson(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  const std::size_t cells = n - 1;
  const std::size_t paired = cells - cells % 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < paired; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (paired < cells) {
    // Last cell alone: integrate the quadratic through the final three nodes.
    const std::size_t i = n - 3;
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    sum += f[i] * (-h1 * h1 * h1) / (6.0 * h0 * (h0 + h1)) +
           f[i + 1] * h1 * (h1 + 3.0 * h0) / (6.0 * h0) +
           f[i + 2] * h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
  }
  return sum;
}

double integrate_radial(const RadialGrid& grid, std::span<const double> f, int weight_power) {
  if (f.size() != grid.size()) {
    throw Error(ErrorKind::InvalidArgument, "integrand must match the grid");
  }
  const auto r = grid.nodes();
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g[i] = f[i] * (weight_power == 0 ? 1.0 : std::pow(r[i], weight_power));
  }
  const int n = grid.dim();
  return n * unit_ball_measure(n) * simpson(r, g);
}

double integrate_radial(const RadialProfile& profile, int weight_power) {
  return integrate_radial(profile.grid(), profile.values(), weight_power);
}

double integrate_radial(const RadialProfile& profile) {
  return integrate_radial(profile, profile.grid().dim() - 1);
}

double lq_norm(const RadialProfile& profile, double q) {
  if (!(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "lq_norm needs q >= 1");
  const auto v = profile.values();
  std::vector<double> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f[i] = std::pow(std::abs(v[i]), q);
  return std::pow(integrate_radial(profile.grid(), f, profile.grid().dim() - 1), 1.0 / q);
}

double grad_lp_seminorm(const RadialProfile& profile, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::InvalidArgument, "grad_lp_seminorm needs p > 1");
  const auto d = profile.slopes();
  std::vector<double> f(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) f[i] = std::pow(std::abs(d[i]), p);
  return std::pow(integrate_radial(profile.grid(), f, profile.grid().dim() - 1), 1.0 / p);
}

double signed_q_moment(const RadialProfile& profile, double q) {
  if (!(q > 1.0)) throw Error(ErrorKind::InvalidArgument, "signed_q_moment needs q > 1");
  const auto v = profile.values();
  std::vector<double> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    f[i] = std::copysign(std::pow(std::abs(v[i]), q - 1.0), v[i]);
  }
  return integrate_radial(profile.grid(), f, profile.grid().dim() - 1);
}

}  // namespace twisted
