#pragma once

namespace twisted {

/// Exponents (p, q) and spatial dimension N of the twisted eigenvalue problem
///
///   lambda^{p,q}(Omega) = inf ||grad v||_p / ||v||_q  over v in W_0^{1,p},
///                          subject to  int |v|^{q-2} v = 0.
///
/// Admissible when p > 1, q > 1, N >= 1 and, for p < N, q stays strictly
/// below the Sobolev exponent p* = N p / (N - p). Only `validate` constructs
/// instances, so every ProblemParams in circulation is admissible.
class ProblemParams {
 public:
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  int dim() const noexcept { return dim_; }

  /// N p / (N - p) when p < N, +infinity otherwise.
  double sobolev_exponent() const noexcept;

  friend ProblemParams validate(double p, double q, int dim);

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

 private:
  ProblemParams(double p, double q, int dim) : p_(p), q_(q), dim_(dim) {}

  double p_;
  double q_;
  int dim_;
};

/// Checks admissibility; throws Error{NonAdmissible} naming the violated condition.
ProblemParams validate(double p, double q, int dim);

/// Dilation exponent sigma = N/p - 1 - N/q, so that
/// lambda(t Omega) = t^sigma lambda(Omega). Negative for admissible params.
///
/// Derivation: v_t(x) = v(x/t) has ||grad v_t||_p = t^{N/p - 1} ||grad v||_p
/// and ||v_t||_q = t^{N/q} ||v||_q, while the signed moment only picks up t^N.
double scaling_exponent(const ProblemParams& params) noexcept;

/// p' = p / (p - 1). Requires p > 1.
double conjugate_exponent(double p);

}  // namespace twisted
