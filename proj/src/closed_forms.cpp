#include "blowuplab/closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "blowuplab/elliptic.hpp"
#include "blowuplab/errors.hpp"

namespace blowuplab::closed_forms {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_zero_coeff(double x, double ref) { return std::abs(x) <= 1e-14 * std::max(1.0, ref); }

void require_b_zero(const OdeParams& p, const char* family) {
  if (!is_zero_coeff(p.B, std::abs(p.A)) || p.A == 0.0) {
    throw BranchMismatch(std::string(family) + " requires B = 0 and A != 0");
  }
}

// Pole of a branch singular at ts (possibly several). Returns the one on the
// side of t when t lies at or beyond it, relative to the anchor t = 0.
std::optional<double> nearest_on_side(std::initializer_list<double> poles, double t) {
  std::optional<double> best;
  for (double tp : poles) {
    if (!std::isfinite(tp)) continue;
    const bool same_side = (t >= 0.0 && tp > 0.0) || (t < 0.0 && tp < 0.0);
    if (!same_side) continue;
    if (!best || std::abs(tp) < std::abs(*best)) best = tp;
  }
  return best;
}

// Poles of tan(omega*t + theta0), theta0 in (-pi/2, pi/2): nearest on each side.
std::optional<double> tan_pole(double omega, double theta0, double t) {
  const double half_pi = std::numbers::pi / 2.0;
  return nearest_on_side({(half_pi - theta0) / omega, (-half_pi - theta0) / omega}, t);
}

}  // namespace

std::string name_of(const ClosedForm& cf) {
  return std::visit(Overloaded{
                        [](const Tanh&) { return std::string("Tanh"); },
                        [](const RationalE0&) { return std::string("RationalE0"); },
                        [](const TanBranch&) { return std::string("TanBranch"); },
                        [](const RecipTanhBranch&) { return std::string("RecipTanhBranch"); },
                        [](const RationalC0&) { return std::string("RationalC0"); },
                        [](const Logistic&) { return std::string("Logistic"); },
                        [](const Lemniscatic&) { return std::string("Lemniscatic"); },
                    },
                    cf);
}

std::optional<double> pole_towards(const ClosedForm& cf, const OdeParams& params, double t) {
  return std::visit(
      Overloaded{
          [&](const Tanh&) -> std::optional<double> {
            require_b_zero(params, "Tanh");
            return std::nullopt;
          },
          [&](const RationalE0& f) -> std::optional<double> {
            if (!is_zero_coeff(params.A, params.B) || !(params.B > 0.0)) {
              throw BranchMismatch("RationalE0 requires A = 0 and B > 0");
            }
            if (f.u0 == 0.0 || (f.sign != 1 && f.sign != -1)) {
              throw BranchMismatch("RationalE0 requires u0 != 0 and sign = +-1");
            }
            const double s = std::sqrt(params.B / 2.0);
            return nearest_on_side({-1.0 / (f.sign * s * f.u0)}, t);
          },
          [&](const TanBranch& f) -> std::optional<double> {
            require_b_zero(params, "TanBranch");
            if (!(f.C > 0.0)) throw BranchMismatch("TanBranch requires C > 0");
            const double r = std::sqrt(f.C);
            return tan_pole(params.A * r / 2.0, std::atan(f.u0 / r), t);
          },
          [&](const RecipTanhBranch& f) -> std::optional<double> {
            require_b_zero(params, "RecipTanhBranch");
            const double b = std::sqrt(-f.C);
            if (!(f.C < 0.0) || !(std::abs(f.u0) > b)) {
              throw BranchMismatch("RecipTanhBranch requires C < 0 and |u0| > sqrt(-C)");
            }
            const double c = std::atanh(-b / f.u0);
            return nearest_on_side({-2.0 * c / (params.A * b)}, t);
          },
          [&](const RationalC0& f) -> std::optional<double> {
            require_b_zero(params, "RationalC0");
            if (f.u0 == 0.0) throw BranchMismatch("RationalC0 requires u0 != 0");
            return nearest_on_side({2.0 / (params.A * f.u0)}, t);
          },
          [&](const Logistic& f) -> std::optional<double> {
            if (!(f.k > 0.0)) throw BranchMismatch("Logistic requires k > 0");
            if (f.g0 > 0.0) {
              const double r = std::sqrt(f.g0 / f.k);
              if (std::abs(f.y0) <= r) return std::nullopt;
              const double c = std::atanh(r / f.y0);
              return nearest_on_side({-c / std::sqrt(f.g0 * f.k)}, t);
            }
            if (f.g0 == 0.0) {
              if (f.y0 == 0.0) return std::nullopt;
              return nearest_on_side({-1.0 / (f.k * f.y0)}, t);
            }
            const double r = std::sqrt(-f.g0 / f.k);
            return tan_pole(std::sqrt(-f.g0 * f.k), -std::atan(f.y0 / r), t);
          },
          [&](const Lemniscatic& f) -> std::optional<double> {
            if (!is_zero_coeff(params.A, params.B) || !(params.B < 0.0)) {
              throw BranchMismatch("Lemniscatic requires A = 0 and B < 0");
            }
            if (!(f.kappa > 0.0) ||
                std::abs(2.0 * f.kappa * f.kappa + params.B) > 1e-12 * std::abs(params.B)) {
              throw BranchMismatch("Lemniscatic requires 2*kappa^2 = -B");
            }
            return std::nullopt;
          },
      },
      cf);
}

Value eval(const ClosedForm& cf, const OdeParams& params, double t) {
  if (const auto pole = pole_towards(cf, params, t)) {
    if (std::abs(t) >= std::abs(*pole)) return PoleAt{*pole};
  }
  return std::visit(
      Overloaded{
          [&](const Tanh& f) -> Value {
            const double rate = params.A * f.b / 2.0;
            const double th = std::tanh(rate * t + f.c);
            return Sample{-f.b * th, -f.b * rate * (1.0 - th * th)};
          },
          [&](const RationalE0& f) -> Value {
            const double s = std::sqrt(params.B / 2.0);
            const double u = f.u0 / (1.0 + f.sign * s * f.u0 * t);
            return Sample{u, -f.sign * s * u * u};
          },
          [&](const TanBranch& f) -> Value {
            const double r = std::sqrt(f.C);
            const double u = r * std::tan(params.A * r * t / 2.0 + std::atan(f.u0 / r));
            return Sample{u, params.A / 2.0 * (u * u + f.C)};
          },
          [&](const RecipTanhBranch& f) -> Value {
            const double b = std::sqrt(-f.C);
            const double c = std::atanh(-b / f.u0);
            const double u = -b / std::tanh(params.A * b * t / 2.0 + c);
            return Sample{u, params.A / 2.0 * (u * u + f.C)};
          },
          [&](const RationalC0& f) -> Value {
            const double u = f.u0 / (1.0 - params.A / 2.0 * f.u0 * t);
            return Sample{u, params.A / 2.0 * u * u};
          },
          [&](const Logistic& f) -> Value {
            double y = f.y0;
            if (f.g0 > 0.0) {
              const double r = std::sqrt(f.g0 / f.k);
              const double w = std::sqrt(f.g0 * f.k);
              if (std::abs(f.y0) < r) {
                y = r * std::tanh(w * t + std::atanh(f.y0 / r));
              } else if (std::abs(f.y0) > r) {
                y = r / std::tanh(w * t + std::atanh(r / f.y0));
              }
            } else if (f.g0 == 0.0) {
              y = f.y0 / (1.0 + f.k * f.y0 * t);
            } else {
              const double r = std::sqrt(-f.g0 / f.k);
              y = -r * std::tan(std::sqrt(-f.g0 * f.k) * t - std::atan(f.y0 / r));
            }
            return Sample{y, f.g0 - f.k * y * y};
          },
          [&](const Lemniscatic& f) -> Value {
            const elliptic::SlValue s = elliptic::sl(f.Cc * f.kappa * (t + f.t0));
            return Sample{f.Cc * s.value, f.Cc * f.Cc * f.kappa * s.derivative};
          },
      },
      cf);
}

double sech_profile(double a, double b, double c, double x) {
  if (!(a > 0.0)) throw DomainError("sech_profile: amplitude must be > 0");
  return a / std::cosh(b * x + c);
}

double m4_constant_C(double u0, double v0, double A) {
  if (A == 0.0) throw DomainError("m4_constant_C: A must be nonzero");
  return (2.0 / A) * (v0 - (A / 2.0) * u0 * u0);
}

ClosedForm m4_branch(const OdeParams& params, double u0, double v0) {
  require_b_zero(params, "m4_branch");
  if (v0 == 0.0) throw BranchMismatch("m4_branch: v0 = 0 is the stationary line");
  const double C = m4_constant_C(u0, v0, params.A);
  if (C > 0.0) return TanBranch{C, u0};
  if (C == 0.0) return RationalC0{u0};
  const double b = std::sqrt(-C);
  if (std::abs(u0) < b) return Tanh{b, std::atanh(-u0 / b)};
  return RecipTanhBranch{C, u0};
}

double tanh_rate(const OdeParams& params, double C) { return params.A * std::sqrt(std::abs(C)); }

}  // namespace blowuplab::closed_forms
