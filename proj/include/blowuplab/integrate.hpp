#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "blowuplab/model.hpp"

namespace blowuplab {

enum class IntegratorKind { RK4, Gauss6 };

std::string to_string(IntegratorKind kind);
/// Accepts "rk4" and "gauss6" (case-insensitive); throws DomainError otherwise.
IntegratorKind parse_integrator(const std::string& name);

/// Classical order of the method.
int order_of(IntegratorKind kind);

struct IntegrateOptions {
  double h0 = 1e-2;                 // initial step magnitude
  double t_end = 1.0;               // may lie before the initial time
  double blowup_threshold = 1e8;    // on |u|; |v| uses its square
  double local_tol = 1e-10;         // step-doubling error target
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 10'000'000;
  int record_every = 1;
  // Fixed steps of exactly h0 when false; the grid is then uniform.
  bool adaptive = true;
  double stage_tol = 1e-13;         // Gauss6 stage residual target
  int stage_max_iter = 50;

  /// Throws DomainError naming the first invalid field.
  void validate() const;
};

struct Completed {};
struct BlowUp {
  double t_estimate = 0.0;
  int direction = 1;  // +1 forward in t, -1 backward
  int sign = 1;       // sign of u at the threshold crossing
};
struct StepUnderflow {
  double t_last = 0.0;
};
struct MaxSteps {};

using Termination = std::variant<Completed, BlowUp, StepUnderflow, MaxSteps>;

std::string termination_name(const Termination& t);

struct Trajectory {
  OdeParams params;
  std::vector<State> states;  // strictly monotone in t
  Termination termination = Completed{};
  IntegratorKind integrator = IntegratorKind::RK4;
  IntegrateOptions options;
  // Index of the initial condition in states; nonzero only for two-sided runs.
  std::size_t origin = 0;

  bool completed() const { return std::holds_alternative<Completed>(termination); }
  bool blew_up() const { return std::holds_alternative<BlowUp>(termination); }
};

State step_rk4(const OdeParams& p, const State& s, double h);

/// One step of the 3-stage Gauss-Legendre collocation method. Stage
/// equations are solved by fixed-point sweeps seeded with an explicit Euler
/// prediction, falling back to damped Newton when the sweeps stall.
State step_gauss6(const OdeParams& p, const State& s, double h, double stage_tol = 1e-13,
                  int max_iter = 50);

State step(IntegratorKind kind, const OdeParams& p, const State& s, double h,
           const IntegrateOptions& opts = {});

/// Butcher tableau of the Gauss6 method, exposed for order-condition checks.
struct Gauss6Tableau {
  double a[3][3];
  double b[3];
  double c[3];
};
const Gauss6Tableau& gauss6_tableau();

Trajectory integrate(const OdeParams& p, const State& s0, IntegratorKind kind,
                     const IntegrateOptions& opts);

/// Integrates from s0 back to t_lo and forward to t_hi and merges both
/// halves into one increasing trajectory whose origin marks s0. Termination
/// is the first non-Completed of (backward, forward), else Completed.
Trajectory integrate_two_sided(const OdeParams& p, const State& s0, IntegratorKind kind,
                               IntegrateOptions opts, double t_lo, double t_hi);

/// Fits 1/u affine in t over the blow-up tail (last 20 recorded states with
/// |u| >= 1e3) and returns its zero. Throws FitFailure on a non-BlowUp
/// trajectory, fewer than 4 tail samples, or a degenerate fit.
double estimate_blowup_time(const Trajectory& traj);

/// T = integral over [a, inf) of dv / sqrt(a_coef*v^4 + c), the escape time
/// of v' = sqrt(a_coef*v^4 + c) from v(0) = a.
double quadrature_blowup_time(double a_coef, double c, double a);

}  // namespace blowuplab
