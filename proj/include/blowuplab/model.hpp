#pragma once

#include <cmath>
#include <optional>

namespace blowuplab {

/// Coefficients of u'' = A*u*u' + B*u^3 together with the characteristic
/// quadratic 2k^2 + A*k - B = 0 that drives the g_k diagnostic.
///
/// When built from a source dimension m, A = (8-m)/(m-2) and
/// B = 2(m-4)/(m-2)^2, so that A^2 + 8B = (m/(m-2))^2 > 0.
struct OdeParams {
  double A = 0.0;
  double B = 0.0;
  std::optional<double> m;
  double disc = 0.0;  // A^2 + 8B
  std::optional<double> k_minus;  // smaller root, present iff disc >= 0
  std::optional<double> k_plus;

  bool has_real_roots() const { return k_minus.has_value(); }
};

/// A point (t, u, u') of extended phase space. Always finite.
struct State {
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;  // u'
};

struct Derivative {
  double du = 0.0;
  double dv = 0.0;
};

/// Throws DomainError unless m > 2.
OdeParams params_from_dimension(double m);

OdeParams params_from_coeffs(double A, double B);

/// Residual of the characteristic quadratic at k.
double characteristic_residual(const OdeParams& p, double k);

inline Derivative rhs(const OdeParams& p, const State& s) {
  return {s.v, p.A * s.u * s.v + p.B * s.u * s.u * s.u};
}

inline bool is_finite(const State& s) {
  return std::isfinite(s.t) && std::isfinite(s.u) && std::isfinite(s.v);
}
}  // namespace blowuplab
