#include "blowuplab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowuplab/closed_forms.hpp"
#include "blowuplab/diagnostics.hpp"
#include "blowuplab/errors.hpp"

namespace blowuplab {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Trivial: return "Trivial";
    case VerdictKind::Stationary: return "Stationary";
    case VerdictKind::GlobalBounded: return "GlobalBounded";
    case VerdictKind::BlowUpForward: return "BlowUpForward";
    case VerdictKind::BlowUpBackward: return "BlowUpBackward";
    case VerdictKind::NoGlobalSolution: return "NoGlobalSolution";
    case VerdictKind::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

std::string to_string(Scope scope) {
  switch (scope) {
    case Scope::Both: return "both";
    case Scope::Forward: return "forward";
    case Scope::Backward: return "backward";
  }
  return "both";
}

std::string to_string(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::Pass: return "pass";
    case VerifyStatus::Fail: return "fail";
    case VerifyStatus::Inconclusive: return "inconclusive";
    case VerifyStatus::NotApplicable: return "n/a";
  }
  return "n/a";
}

namespace {

bool nearly_zero(double x, double scale) { return std::abs(x) <= 1e-14 * scale; }

Verdict make(VerdictKind kind, std::string basis) {
  Verdict v;
  v.kind = kind;
  v.basis = std::move(basis);
  return v;
}

// B = 0, A > 0. u' - (A/2) u^2 is conserved, so every orbit lies on a parabola.
Verdict classify_quadratic_first_integral(const OdeParams& p, double u0, double v0) {
  if (v0 == 0.0) return make(VerdictKind::Stationary, "b0-stationary-line");
  const double C = closed_forms::m4_constant_C(u0, v0, p.A);
  const closed_forms::ClosedForm branch = closed_forms::m4_branch(p, u0, v0);
  if (C < 0.0 && u0 * u0 < -C) {
    const auto& th = std::get<closed_forms::Tanh>(branch);
    Verdict v = make(VerdictKind::GlobalBounded, "b0-tanh-branch");
    v.detail.tanh_b = th.b;
    v.detail.tanh_c = th.c;
    v.detail.branch = closed_forms::name_of(branch);
    return v;
  }
  Verdict v = make(VerdictKind::NoGlobalSolution, "b0-singular-branch");
  v.detail.branch = closed_forms::name_of(branch);
  return v;
}

// A > 0, B > 0. Both g_k change sign only through zero, and the outward
// quadrant u*u' >= 0 is forward invariant with u'' >= B u^3 there.
Verdict classify_both_positive(const OdeParams& p, double u0, double v0) {
  const double kp = *p.k_plus;
  const double g = diagnostics::g_k(State{0.0, u0, v0}, kp);
  // Forward when the data point into the outward quadrant, backward for the
  // mirrored pattern obtained from w(t) = -u(-t).
  const bool forward = v0 >= 0.0 ? u0 >= 0.0 : u0 <= 0.0;
  Verdict v = make(forward ? VerdictKind::BlowUpForward : VerdictKind::BlowUpBackward, "");
  if (v0 >= 0.0) {
    v.basis = "outward-quadrant";
  } else if (g <= 0.0 || nearly_zero(g, std::abs(v0) + kp * u0 * u0)) {
    v.basis = "gk-plus-comparison";
    if (u0 != 0.0) {
      v.detail.blowup_bound = 1.0 / (kp * std::abs(u0));
      v.detail.bound_is_exact = nearly_zero(g, std::abs(v0) + kp * u0 * u0);
      if (v.detail.bound_is_exact) v.detail.branch = "separatrix";
    }
  } else {
    v.basis = "gk-plus-positive";
  }
  if (!forward) v.basis += "+mirror";
  return v;
}

// A = 0, B > 0: e = u'^2/2 - B u^4/4 is conserved.
Verdict classify_conservative(const OdeParams& p, double u0, double v0) {
  const double e0 = 0.5 * v0 * v0 - 0.25 * p.B * u0 * u0 * u0 * u0;
  const double terms = 0.5 * v0 * v0 + 0.25 * p.B * u0 * u0 * u0 * u0;
  Verdict v;
  if (nearly_zero(e0, terms)) {
    // u' = -sign sqrt(B/2) u^2 exactly; one side decays, the other has a pole.
    const bool forward = u0 * v0 > 0.0;
    v = make(forward ? VerdictKind::BlowUpForward : VerdictKind::BlowUpBackward,
             "zero-energy-rational");
    v.detail.blowup_bound = 1.0 / (std::sqrt(p.B / 2.0) * std::abs(u0));
    v.detail.bound_is_exact = true;
    v.detail.branch = "RationalE0";
  } else {
    // The quartic potential has no well: the orbit escapes on both sides.
    v = make(VerdictKind::NoGlobalSolution, e0 > 0.0 ? "energy-positive" : "energy-negative");
  }
  v.detail.e0 = e0;
  return v;
}

// A > 0, B < 0 with real roots: g_{k_plus} < 0 with u0 <= 0 traps the orbit
// in a region where it decays to the origin.
bool forward_global_mixed(const OdeParams& p, double u0, double v0) {
  return u0 <= 0.0 && diagnostics::g_k(State{0.0, u0, v0}, *p.k_plus) < 0.0;
}

Verdict classify_mixed(const OdeParams& p, double u0, double v0) {
  const bool fwd = forward_global_mixed(p, u0, v0);
  const bool bwd = forward_global_mixed(p, -u0, v0);
  if (!fwd && !bwd) return make(VerdictKind::Unclassified, "mixed-signs-open");
  Verdict v = make(VerdictKind::GlobalBounded, "gk-plus-trapping");
  v.scope = fwd && bwd ? Scope::Both : (fwd ? Scope::Forward : Scope::Backward);
  if (!fwd) v.basis += "+mirror";
  v.detail.decays = true;
  return v;
}

Verdict classify_nonnegative_A(const OdeParams& p, double u0, double v0) {
  if (p.disc < 0.0) return make(VerdictKind::Unclassified, "complex-roots");
  if (p.A == 0.0 && p.B == 0.0) {
    return v0 == 0.0 ? make(VerdictKind::Stationary, "free-particle-rest")
                     : make(VerdictKind::Unclassified, "free-particle-linear");
  }
  if (p.B == 0.0) return classify_quadratic_first_integral(p, u0, v0);
  if (p.A == 0.0) return classify_conservative(p, u0, v0);
  if (p.B > 0.0) return classify_both_positive(p, u0, v0);
  return classify_mixed(p, u0, v0);
}

VerdictKind swap_direction(VerdictKind kind) {
  if (kind == VerdictKind::BlowUpForward) return VerdictKind::BlowUpBackward;
  if (kind == VerdictKind::BlowUpBackward) return VerdictKind::BlowUpForward;
  return kind;
}

Scope swap_scope(Scope s) {
  if (s == Scope::Forward) return Scope::Backward;
  if (s == Scope::Backward) return Scope::Forward;
  return s;
}

}  // namespace

Verdict classify(const OdeParams& p, double u0, double v0) {
  if (u0 == 0.0 && v0 == 0.0) return make(VerdictKind::Trivial, "origin");
  if (p.A >= 0.0) return classify_nonnegative_A(p, u0, v0);
  // u(-t) solves the equation with -A and data (u0, -v0).
  Verdict v = classify_nonnegative_A(params_from_coeffs(-p.A, p.B), u0, -v0);
  v.kind = swap_direction(v.kind);
  v.scope = swap_scope(v.scope);
  v.basis += "+time-reversal";
  return v;
}

double default_horizon(const Verdict& verdict) {
  switch (verdict.kind) {
    case VerdictKind::BlowUpForward:
    case VerdictKind::BlowUpBackward:
    case VerdictKind::NoGlobalSolution:
      return 50.0;
    default:
      return 200.0;
  }
}

namespace {

constexpr double kDecayLimit = 0.05;
constexpr double kTanhEndpointTol = 1e-7;
constexpr double kBoundSlack = 1e-6;
constexpr double kExactBoundTol = 1e-3;

Trajectory run(const OdeParams& p, double u0, double v0, double t_end) {
  IntegrateOptions opts;
  opts.t_end = t_end;
  opts.local_tol = 1e-10;
  const IntegratorKind kind = p.disc < 0.0 ? IntegratorKind::Gauss6 : IntegratorKind::RK4;
  return integrate(p, State{0.0, u0, v0}, kind, opts);
}

double sup_abs_u(const Trajectory& t) {
  double m = 0.0;
  for (const State& s : t.states) m = std::max(m, std::abs(s.u));
  return m;
}

bool stopped_early(const Trajectory& t) {
  return std::holds_alternative<StepUnderflow>(t.termination) ||
         std::holds_alternative<MaxSteps>(t.termination);
}

double blowup_time(const Trajectory& t) {
  try {
    return estimate_blowup_time(t);
  } catch (const FitFailure&) {
    return std::get<BlowUp>(t.termination).t_estimate;
  }
}

void check_blowup(const Verdict& verdict, const Trajectory& run, VerifyReport& r) {
  if (stopped_early(run)) {
    r.status = VerifyStatus::Inconclusive;
    r.message = "run stopped without crossing the threshold";
    return;
  }
  if (!run.blew_up()) {
    r.status = VerifyStatus::Fail;
    r.message = "no blow-up in the claimed direction";
    return;
  }
  const double T = blowup_time(run);
  r.t_blowup_estimate = T;
  r.status = VerifyStatus::Pass;
  if (const auto& bound = verdict.detail.blowup_bound) {
    const bool ok = verdict.detail.bound_is_exact
                        ? std::abs(std::abs(T) - *bound) <= kExactBoundTol * *bound
                        : std::abs(T) <= *bound * (1.0 + kBoundSlack);
    if (!ok) {
      r.status = VerifyStatus::Fail;
      r.message = "blow-up time violates the carried bound";
    }
  }
}

}  // namespace

VerifyReport verify_verdict(const OdeParams& p, double u0, double v0, const Verdict& verdict,
                            double horizon) {
  if (!(horizon > 0.0)) throw DomainError("verify_verdict: horizon must be > 0");
  VerifyReport r;
  if (verdict.kind == VerdictKind::Unclassified) {
    r.message = "nothing claimed";
    return r;
  }
  if (verdict.kind == VerdictKind::Trivial) {
    r.status = (u0 == 0.0 && v0 == 0.0) ? VerifyStatus::Pass : VerifyStatus::Fail;
    return r;
  }

  const Trajectory fwd = run(p, u0, v0, horizon);
  const Trajectory bwd = run(p, u0, v0, -horizon);
  r.forward_termination = termination_name(fwd.termination);
  r.backward_termination = termination_name(bwd.termination);
  r.sup_abs_u = std::max(sup_abs_u(fwd), sup_abs_u(bwd));
  r.u_forward_end = fwd.states.back().u;
  r.u_backward_end = bwd.states.back().u;

  switch (verdict.kind) {
    case VerdictKind::Stationary: {
      double drift = 0.0;
      for (const Trajectory* t : {&fwd, &bwd}) {
        for (const State& s : t->states) drift = std::max(drift, std::abs(s.u - u0));
      }
      const bool ok = fwd.completed() && bwd.completed() &&
                      drift <= 1e-12 * std::max(1.0, std::abs(u0));
      r.status = ok ? VerifyStatus::Pass : VerifyStatus::Fail;
      return r;
    }
    case VerdictKind::BlowUpForward:
      check_blowup(verdict, fwd, r);
      return r;
    case VerdictKind::BlowUpBackward:
      check_blowup(verdict, bwd, r);
      return r;
    case VerdictKind::NoGlobalSolution:
      if (fwd.blew_up() || bwd.blew_up()) {
        r.status = VerifyStatus::Pass;
        r.t_blowup_estimate = blowup_time(fwd.blew_up() ? fwd : bwd);
      } else if (fwd.completed() && bwd.completed()) {
        r.status = VerifyStatus::Fail;
        r.message = "global on both sides within the horizon";
      } else {
        r.status = VerifyStatus::Inconclusive;
        r.message = "run stopped without crossing the threshold";
      }
      return r;
    case VerdictKind::GlobalBounded: {
      r.status = VerifyStatus::Pass;
      const bool want_fwd = verdict.scope != Scope::Backward;
      const bool want_bwd = verdict.scope != Scope::Forward;
      for (const auto& [want, traj] : {std::pair{want_fwd, &fwd}, std::pair{want_bwd, &bwd}}) {
        if (!want) continue;
        if (stopped_early(*traj)) {
          r.status = VerifyStatus::Inconclusive;
          r.message = "run stopped early";
          return r;
        }
        if (!traj->completed() || !std::isfinite(sup_abs_u(*traj))) {
          r.status = VerifyStatus::Fail;
          r.message = "claimed global side terminated";
          return r;
        }
        const State& end = traj->states.back();
        if (verdict.detail.decays && std::abs(end.u) > kDecayLimit) {
          r.status = VerifyStatus::Fail;
          r.message = "no decay at the horizon";
        }
        if (verdict.detail.tanh_b && verdict.detail.tanh_c) {
          const closed_forms::Tanh th{*verdict.detail.tanh_b, *verdict.detail.tanh_c};
          const auto exact = std::get<closed_forms::Sample>(closed_forms::eval(th, p, end.t));
          r.endpoint_error = std::max(r.endpoint_error, std::abs(end.u - exact.u));
          if (r.endpoint_error > kTanhEndpointTol) {
            r.status = VerifyStatus::Fail;
            r.message = "endpoint departs from the tanh branch";
          }
        }
      }
      return r;
    }
    default:
      return r;
  }
}

PeriodReport detect_period(const OdeParams& p, const State& s0, double t_max, double tol) {
  if (!(t_max > 0.0)) throw DomainError("detect_period: t_max must be > 0");
  if (!(tol > 0.0)) throw DomainError("detect_period: tol must be > 0");
  PeriodReport report;
  report.closure_error = std::numeric_limits<double>::infinity();

  // Section through s0: u = u0 crossed in the direction of v0, or v = v0 = 0
  // crossed in the direction of u'' at s0. A rest point has no section.
  const double accel = rhs(p, s0).dv;
  const bool on_u = s0.v != 0.0;
  const double dir = on_u ? std::copysign(1.0, s0.v) : (accel == 0.0 ? 0.0 : std::copysign(1.0, accel));
  if (dir == 0.0) {
    report.closure_error = 0.0;
    return report;
  }
  auto sigma = [&](const State& s) { return dir * (on_u ? s.u - s0.u : s.v - s0.v); };
  const double v_scale = std::max(1.0, s0.v * s0.v);
  auto closure = [&](const State& s) {
    const double du = s.u - s0.u;
    const double dv = s.v - s0.v;
    return std::sqrt(du * du + dv * dv / v_scale);
  };

  IntegrateOptions opts;
  opts.t_end = s0.t + t_max;
  opts.local_tol = 1e-12;
  opts.h0 = 1e-3;
  const Trajectory traj = integrate(p, s0, IntegratorKind::Gauss6, opts);
  if (!traj.completed()) {
    throw Inconclusive("detect_period: run ended with " + termination_name(traj.termination));
  }

  const auto& st = traj.states;
  for (std::size_t i = 1; i < st.size(); ++i) {
    if (!(sigma(st[i - 1]) < 0.0 && sigma(st[i]) >= 0.0)) continue;
    double lo = 0.0;
    double hi = st[i].t - st[i - 1].t;
    State at = st[i];
    for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(st[i].t)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const State s = step_gauss6(p, st[i - 1], mid);
      if (sigma(s) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
        at = s;
      }
    }
    const double err = closure(at);
    report.closure_error = std::min(report.closure_error, err);
    if (err <= tol) {
      report.periodic = true;
      report.period = at.t - s0.t;
      report.closure_error = err;
      return report;
    }
  }
  return report;
}

}  // namespace blowuplab
