#include "blowuplab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blowuplab/errors.hpp"
#include "blowuplab/integrate.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab::elliptic {

double lemniscate_quarter_period() {
  // y = sin(x) turns the integral into int_0^{pi/2} dx / sqrt(1 + sin^2 x),
  // which has an analytic integrand.
  static const double value = [] {
    const auto f = [](double x) {
      const double s = std::sin(x);
      return 1.0 / std::sqrt(1.0 + s * s);
    };
    return quad::gauss_kronrod(f, 0.0, std::numbers::pi / 2.0, 1e-15, 1e-15).value;
  }();
  return value;
}

double K_agm(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("K_agm: modulus must satisfy 0 <= k < 1");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
  }
  return std::numbers::pi / (a + b);
}

LemniscaticTable::LemniscaticTable(int intervals) {
  quarter_period_ = lemniscate_quarter_period();
  step_ = quarter_period_ / intervals;
  const OdeParams p = params_from_coeffs(0.0, -2.0);
  samples_.reserve(static_cast<std::size_t>(intervals) + 1);
  State s{0.0, 0.0, 1.0};
  samples_.push_back({0.0, 0.0, 1.0});
  for (int i = 1; i <= intervals; ++i) {
    s = step_gauss6(p, s, step_, 1e-16, 100);
    s.t = i * step_;
    samples_.push_back({s.t, s.u, s.v});
  }
}

const LemniscaticTable& LemniscaticTable::instance() {
  static const LemniscaticTable table(4096);
  return table;
}

SlValue LemniscaticTable::interpolate(double t) const {
  const double x = std::clamp(t, 0.0, quarter_period_);
  const auto last = static_cast<std::ptrdiff_t>(samples_.size()) - 2;
  const auto i = std::clamp(static_cast<std::ptrdiff_t>(x / step_), std::ptrdiff_t{0}, last);
  const Sample& lo = samples_[static_cast<std::size_t>(i)];
  const Sample& hi = samples_[static_cast<std::size_t>(i) + 1];
  const double h = hi.t - lo.t;
  const double s = (x - lo.t) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  // y' is interpolated with its own derivative y'' = -2y^3.
  const double ddy_lo = -2.0 * lo.y * lo.y * lo.y;
  const double ddy_hi = -2.0 * hi.y * hi.y * hi.y;
  return {h00 * lo.y + h10 * h * lo.dy + h01 * hi.y + h11 * h * hi.dy,
          h00 * lo.dy + h10 * h * ddy_lo + h01 * hi.dy + h11 * h * ddy_hi};
}

SlValue sl(double t) {
  const LemniscaticTable& table = LemniscaticTable::instance();
  const double q = table.quarter_period();
  const double period = 4.0 * q;
  double r = std::fmod(t, period);
  if (r < 0.0) r += period;
  if (r <= q) return table.interpolate(r);
  if (r <= 2.0 * q) {
    const SlValue w = table.interpolate(2.0 * q - r);
    return {w.value, -w.derivative};
  }
  if (r <= 3.0 * q) {
    const SlValue w = table.interpolate(r - 2.0 * q);
    return {-w.value, -w.derivative};
  }
  const SlValue w = table.interpolate(period - r);
  return {-w.value, w.derivative};
}

}  // namespace blowuplab::elliptic
