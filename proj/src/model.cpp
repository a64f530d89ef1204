#include "blowuplab/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "blowuplab/errors.hpp"

namespace blowuplab {

namespace {

void fill_roots(OdeParams& p) {
  p.disc = p.A * p.A + 8.0 * p.B;
  if (p.disc < 0.0) {
    p.k_minus.reset();
    p.k_plus.reset();
    return;
  }
  // 2k^2 + A k - B = 0, cancellation-free form of the quadratic formula.
  const double sq = std::sqrt(p.disc);
  const double q = -0.5 * (p.A + std::copysign(sq, p.A));
  double k1 = 0.0;
  double k2 = 0.0;
  if (q != 0.0) {
    k1 = q / 2.0;
    k2 = -p.B / q + 0.0;  // no negative zero
  }
  if (k1 > k2) std::swap(k1, k2);
  p.k_minus = k1;
  p.k_plus = k2;
}

}  // namespace

OdeParams params_from_dimension(double m) {
  if (!(m > 2.0) || !std::isfinite(m)) {
    throw DomainError("params_from_dimension: m must be finite and > 2, got " + std::to_string(m));
  }
  OdeParams p;
  p.m = m;
  p.A = (8.0 - m) / (m - 2.0);
  p.B = 2.0 * (m - 4.0) / ((m - 2.0) * (m - 2.0));
  fill_roots(p);
  return p;
}

OdeParams params_from_coeffs(double A, double B) {
  OdeParams p;
  p.A = A;
  p.B = B;
  fill_roots(p);
  return p;
}

double characteristic_residual(const OdeParams& p, double k) {
  return 2.0 * k * k + p.A * k - p.B;
}

}  // namespace blowuplab
