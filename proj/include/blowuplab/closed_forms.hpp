#pragma once

#include <optional>
#include <string>
#include <variant>

#include "blowuplab/model.hpp"

namespace blowuplab::closed_forms {

// Exact solution families used as oracles. Each is anchored at t = 0; the
// maximal interval of a non-global branch is the one containing t = 0.

/// u = -b tanh(A b t / 2 + c) for B = 0. With A = 2 this is -b tanh(b t + c).
struct Tanh {
  double b = 1.0;
  double c = 0.0;
};
/// u = u0 / (1 + sign*sqrt(B/2)*u0*t) for A = 0, B > 0 (zero energy).
struct RationalE0 {
  double u0 = 1.0;
  int sign = 1;
};
/// B = 0 with C > 0: u = sqrt(C) tan(A sqrt(C) t / 2 + atan(u0/sqrt(C))).
struct TanBranch {
  double C = 1.0;
  double u0 = 0.0;
};
/// B = 0 with C < 0 and |u0| > sqrt(-C): u = -b coth(A b t / 2 + c).
struct RecipTanhBranch {
  double C = -1.0;
  double u0 = 2.0;
};
/// B = 0 with C = 0: u = u0 / (1 - (A/2) u0 t).
struct RationalC0 {
  double u0 = 1.0;
};
/// Solution of the comparison equation y' = g0 - k y^2, y(0) = y0.
/// Its (u, v) are (y, y'); independent of the ODE coefficients.
struct Logistic {
  double g0 = 1.0;
  double k = 1.0;
  double y0 = 0.0;
};
/// u = Cc sl(Cc kappa (t + t0)) for A = 0, B < 0, with 2 kappa^2 = -B.
struct Lemniscatic {
  double Cc = 1.0;
  double kappa = 1.0;
  double t0 = 0.0;
};

using ClosedForm =
    std::variant<Tanh, RationalE0, TanBranch, RecipTanhBranch, RationalC0, Logistic, Lemniscatic>;

std::string name_of(const ClosedForm& cf);

struct Sample {
  double u = 0.0;
  double v = 0.0;
};
struct PoleAt {
  double t_pole = 0.0;
};
using Value = std::variant<Sample, PoleAt>;

/// Throws BranchMismatch when params are inconsistent with the family.
Value eval(const ClosedForm& cf, const OdeParams& params, double t);

/// Location of the singularity bounding the maximal interval on the side of
/// t, if any; nullopt for globally defined branches.
std::optional<double> pole_towards(const ClosedForm& cf, const OdeParams& params, double t);

double sech_profile(double a, double b, double c, double x);

/// C = (2/A)(v0 - (A/2) u0^2), the first integral of the B = 0 equation
/// u' = (A/2)(u^2 + C). Throws DomainError if A = 0.
double m4_constant_C(double u0, double v0, double A);

/// The B = 0 (A != 0) closed form through (u0, v0) at t = 0. Throws
/// BranchMismatch for the stationary line v0 = 0 or when B != 0.
ClosedForm m4_branch(const OdeParams& params, double u0, double v0);

/// Read-only A_C = A*sqrt(|C|) of the tanh family.
double tanh_rate(const OdeParams& params, double C);

}  // namespace blowuplab::closed_forms
