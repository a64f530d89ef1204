#pragma once

// Reference values for the test suites. The constants were produced offline
// with 30-digit mpmath quadrature and are frozen here; the tanh-sinh rules
// below recompute them independently of the library's Gauss-Kronrod code.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// int_0^1 dy / sqrt(1 - y^4), the first maximum of sl.
inline constexpr double kQuarterPeriod = 1.3110287771460599052324197949;
// int_0^inf dw / sqrt(1 + w^4) = sqrt(2) * kQuarterPeriod.
inline constexpr double kQuarticEscape = 1.8540746773013719184338503472;
// int_1^inf 3 dv / sqrt(v^4 - 1) = 3 * kQuarterPeriod: m = 8 escape from u = 1, u' = 0.
inline constexpr double kM8EscapeFromRest = 3.9330863314381797156972593847;
// int_2^inf 3 dv / sqrt(v^4 - 1): m = 8 escape from u = 2 with u'^2 = (2^4 - 1)/9.
inline constexpr double kM8EscapeFromTwo = 1.5096283295319926606093555712;

// Integral over (a, b) of f, where f receives the point x together with its
// distances to both ends so that endpoint singularities keep full precision.
// Double-exponential rule with step halving until two levels agree.
inline double tanh_sinh(const std::function<double(double, double, double)>& f, double a,
                        double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double pi_2 = std::numbers::pi / 2.0;
  auto level = [&](double h) {
    double sum = 0.0;
    for (int sign : {-1, 1}) {
      for (int j = (sign < 0 ? 1 : 0);; ++j) {
        const double t = sign * j * h;
        const double s = pi_2 * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(s));
        // 1 - |tanh(s)| = 2e / (1 + e) without cancellation
        const double gap = 2.0 * e / (1.0 + e);
        const double x_off = std::copysign(1.0 - gap, s);
        const double cosh_s = std::cosh(s);
        const double w = pi_2 * std::cosh(t) / (cosh_s * cosh_s);
        const double dist_near = half * gap;
        if (dist_near <= 0.0 || w * half < 1e-300) break;
        const double x = mid + half * x_off;
        const double da = s < 0 ? dist_near : (b - a) - dist_near;
        const double db = s < 0 ? (b - a) - dist_near : dist_near;
        const double term = w * f(x, da, db);
        sum += term;
        if (j > 3 && std::abs(term) < 1e-20 * std::abs(sum)) break;
      }
    }
    return half * h * sum;
  };
  double h = 0.5;
  double prev = level(h);
  for (int k = 0; k < 8; ++k) {
    h *= 0.5;
    const double cur = level(h);
    if (std::abs(cur - prev) <= 1e-15 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

// int_0^1 dy / sqrt(1 - y^4) with 1 - y^4 = (1 - y)(1 + y)(1 + y^2).
inline double quarter_period() {
  return tanh_sinh(
      [](double y, double, double one_minus_y) {
        return 1.0 / std::sqrt(one_minus_y * (1.0 + y) * (1.0 + y * y));
      },
      0.0, 1.0);
}

// int_a^inf dv / sqrt(v^4 - 1) for a >= 1, via v = 1/y: int_0^{1/a} dy / sqrt(1 - y^4).
inline double quartic_tail(double a) {
  const double gap_to_one = 1.0 - 1.0 / a;
  return tanh_sinh(
      [gap_to_one](double y, double, double db) {
        return 1.0 / std::sqrt((db + gap_to_one) * (1.0 + y) * (1.0 + y * y));
      },
      0.0, 1.0 / a);
}

// int_0^inf dw / sqrt(1 + w^4) split at 1; the tail maps to int_0^1 dy / sqrt(1 + y^4).
inline double quartic_escape() {
  const double head = tanh_sinh(
      [](double w, double, double) { return 1.0 / std::sqrt(1.0 + w * w * w * w); }, 0.0, 1.0);
  return 2.0 * head;
}

}  // namespace oracle
