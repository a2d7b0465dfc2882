#include "twisted/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "twisted/errors.hpp"

namespace twisted {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAdmissible: return "NonAdmissible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveInitial: return "NonPositiveInitial";
    case ErrorKind::SingularSource: return "SingularSource";
    case ErrorKind::NoZeroFound: return "NoZeroFound";
    case ErrorKind::RescaleWithMultiplier: return "RescaleWithMultiplier";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::MultiplierUnsupported: return "MultiplierUnsupported";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::IdentityInapplicable: return "IdentityInapplicable";
    case ErrorKind::NegativeValues: return "NegativeValues";
    case ErrorKind::BoundaryNonzero: return "BoundaryNonzero";
    case ErrorKind::NoSignChange: return "NoSignChange";
  }
  return "Unknown";
}

double ProblemParams::sobolev_exponent() const noexcept {
  const double n = static_cast<double>(dim_);
  if (p_ < n) return n * p_ / (n - p_);
  return std::numeric_limits<double>::infinity();
}

ProblemParams validate(double p, double q, int dim) {
  auto reject = [&](const std::string& why) {
    std::ostringstream os;
    os << "(p=" << p << ", q=" << q << ", N=" << dim << "): " << why;
    throw Error(ErrorKind::NonAdmissible, os.str());
  };
  if (!std::isfinite(p) || !(p > 1.0)) reject("p must be finite and > 1");
  if (!std::isfinite(q) || !(q > 1.0)) reject("q must be finite and > 1");
  if (dim < 1) reject("dimension must be >= 1");
  const double n = static_cast<double>(dim);
  // q < p* written without the division: (N - p) q < N p.
  if (p < n && !((n - p) * q < n * p)) {
    std::ostringstream os;
    os << "q must be < p* = " << n * p / (n - p);
    reject(os.str());
  }
  return ProblemParams(p, q, dim);
}

double scaling_exponent(const ProblemParams& params) noexcept {
  const double n = static_cast<double>(params.dim());
  return n / params.p() - 1.0 - n / params.q();
}

double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidArgument, "conjugate exponent needs 1 < p < inf");
  }
  return p / (p - 1.0);
}

}  // namespace twisted
