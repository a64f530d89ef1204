#pragma once

#include <functional>

namespace blowuplab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Refines the interval with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol*|I|) or max_intervals is reached.
/// Endpoints are never evaluated.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-13, double rel_tol = 1e-13, int max_intervals = 4000);

}  // namespace blowuplab::quad
