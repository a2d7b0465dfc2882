#pragma once

#include <optional>
#include <span>
#include <vector>

namespace twisted {

/// omega_N = pi^{N/2} / Gamma(N/2 + 1), the Lebesgue measure of the unit ball.
double unit_ball_measure(int dim);

/// |dB_R| = N omega_N R^{N-1}. For N = 1 this counts the two endpoints.
double sphere_area(int dim, double radius);

/// Nodes on [0, R] for radial functions on B_R in dimension `dim`.
class RadialGrid {
 public:
  /// Throws InvalidArgument unless nodes are strictly increasing from 0,
  /// there are at least 16 of them and dim >= 1.
  RadialGrid(std::vector<double> nodes, int dim);

  static RadialGrid uniform(double radius, std::size_t node_count, int dim);

  double radius() const noexcept { return nodes_.back(); }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }

 private:
  std::vector<double> nodes_;
  int dim_;
};

/// Samples of a radial function u(r) on a RadialGrid. Profiles built from a
/// shooting trajectory also carry the exact slopes u'(r_i); when present they
/// replace finite differences in gradient norms.
class RadialProfile {
 public:
  RadialProfile(RadialGrid grid, std::vector<double> values,
                std::optional<std::vector<double>> slopes = std::nullopt);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  bool has_exact_slopes() const noexcept { return slopes_.has_value(); }

  /// Exact slopes when available, otherwise second-order finite differences.
  std::vector<double> slopes() const;

  RadialProfile scaled(double factor) const;
  RadialProfile negated() const { return scaled(-1.0); }

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  std::optional<std::vector<double>> slopes_;
};

/// Composite Simpson rule on a (possibly non-uniform) grid: exact for
/// quadratics on each pair of cells, with a quadratic end correction when the
/// cell count is odd.
double simpson(std::span<const double> x, std::span<const double> f);

/// N omega_N int_0^R f(r) r^{weight_power} dr.
double integrate_radial(const RadialGrid& grid, std::span<const double> f, int weight_power);
double integrate_radial(const RadialProfile& profile, int weight_power);
double integrate_radial(const RadialProfile& profile);

double lq_norm(const RadialProfile& profile, double q);
double grad_lp_seminorm(const RadialProfile& profile, double p);
double signed_q_moment(const RadialProfile& profile, double q);

/// Second-order finite differences (centered inside, three-point one-sided at
/// the ends).
std::vector<double> finite_difference(std::span<const double> x, std::span<const double> f);

}  // namespace twisted
