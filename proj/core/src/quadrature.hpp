#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eec/coverage.hpp"
#include "eec/errors.hpp"

namespace eec::detail {

/// Adaptive 31-point Gauss-Kronrod over [a, b]. Throws NumericalError when
/// the error estimate exceeds max(abs_tol, rel_tol * L1) after max_depth
/// bisections.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureConfig& cfg, const char* what) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, cfg.max_depth, cfg.rel_tol, &error, &l1);
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(l1));
  if (!std::isfinite(value) || error > allowed) {
    std::ostringstream os;
    os << what << ": quadrature over [" << a << ", " << b << "] reached error " << error
       << " (allowed " << allowed << ")";
    throw NumericalError(os.str(), error);
  }
  return value;
}

}  // namespace eec::detail
