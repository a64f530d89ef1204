#include "blowuplab/integrate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "blowuplab/errors.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

std::string to_string(IntegratorKind kind) {
  return kind == IntegratorKind::RK4 ? "rk4" : "gauss6";
}

IntegratorKind parse_integrator(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rk4") return IntegratorKind::RK4;
  if (lower == "gauss6") return IntegratorKind::Gauss6;
  throw DomainError("unknown integrator '" + name + "' (expected rk4 or gauss6)");
}

int order_of(IntegratorKind kind) { return kind == IntegratorKind::RK4 ? 4 : 6; }

void IntegrateOptions::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw DomainError(std::string("invalid option ") + field + ": " + what);
  };
  require(std::isfinite(h0) && h0 > 0.0, "h0", "must be finite and > 0");
  require(std::isfinite(t_end), "t_end", "must be finite");
  require(std::isfinite(blowup_threshold) && blowup_threshold > 0.0, "blowup_threshold",
          "must be finite and > 0");
  require(local_tol > 0.0, "local_tol", "must be > 0");
  require(h_min > 0.0, "h_min", "must be > 0");
  require(h_max > 0.0, "h_max", "must be > 0");
  require(max_steps > 0, "max_steps", "must be > 0");
  require(record_every >= 1, "record_every", "must be >= 1");
  require(stage_tol > 0.0, "stage_tol", "must be > 0");
  require(stage_max_iter >= 1, "stage_max_iter", "must be >= 1");
}

std::string termination_name(const Termination& t) {
  struct Visitor {
    std::string operator()(const Completed&) const { return "Completed"; }
    std::string operator()(const BlowUp&) const { return "BlowUp"; }
    std::string operator()(const StepUnderflow&) const { return "StepUnderflow"; }
    std::string operator()(const MaxSteps&) const { return "MaxSteps"; }
  };
  return std::visit(Visitor{}, t);
}

// ---------------------------------------------------------------------------
// Steppers

namespace {

void require_finite(const State& s, const char* where) {
  if (!is_finite(s)) throw NonFinite(std::string(where) + ": non-finite stage value");
}

State offset(const State& s, double dt, double du, double dv) {
  return {s.t + dt, s.u + du, s.v + dv};
}

}  // namespace

State step_rk4(const OdeParams& p, const State& s, double h) {
  const Derivative k1 = rhs(p, s);
  const Derivative k2 = rhs(p, offset(s, 0.5 * h, 0.5 * h * k1.du, 0.5 * h * k1.dv));
  const Derivative k3 = rhs(p, offset(s, 0.5 * h, 0.5 * h * k2.du, 0.5 * h * k2.dv));
  const Derivative k4 = rhs(p, offset(s, h, h * k3.du, h * k3.dv));
  State out{s.t + h, s.u + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
            s.v + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)};
  require_finite(out, "step_rk4");
  return out;
}

const Gauss6Tableau& gauss6_tableau() {
  static const Gauss6Tableau tableau = [] {
    const double r = std::sqrt(15.0);
    Gauss6Tableau t{};
    t.c[0] = 0.5 - r / 10.0;
    t.c[1] = 0.5;
    t.c[2] = 0.5 + r / 10.0;
    t.b[0] = 5.0 / 18.0;
    t.b[1] = 4.0 / 9.0;
    t.b[2] = 5.0 / 18.0;
    t.a[0][0] = 5.0 / 36.0;
    t.a[0][1] = 2.0 / 9.0 - r / 15.0;
    t.a[0][2] = 5.0 / 36.0 - r / 30.0;
    t.a[1][0] = 5.0 / 36.0 + r / 24.0;
    t.a[1][1] = 2.0 / 9.0;
    t.a[1][2] = 5.0 / 36.0 - r / 24.0;
    t.a[2][0] = 5.0 / 36.0 + r / 30.0;
    t.a[2][1] = 2.0 / 9.0 + r / 15.0;
    t.a[2][2] = 5.0 / 36.0;
    return t;
  }();
  return tableau;
}

namespace {

// Stage increments Z_i = (du_i, dv_i) with Z_i = h * sum_j a_ij f(y + Z_j).
using Stages = std::array<std::array<double, 2>, 3>;

Stages stage_derivatives(const OdeParams& p, const State& s, const Stages& z) {
  Stages f{};
  for (int j = 0; j < 3; ++j) {
    const Derivative d = rhs(p, {s.t, s.u + z[j][0], s.v + z[j][1]});
    f[j] = {d.du, d.dv};
  }
  return f;
}

// Returns h*A*F(Z) and the max-norm residual |Z - h*A*F(Z)|.
double stage_map(const OdeParams& p, const State& s, double h, const Stages& z, Stages& image) {
  const auto& tab = gauss6_tableau();
  const Stages f = stage_derivatives(p, s, z);
  double res = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 2; ++c) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += tab.a[i][j] * f[j][c];
      image[i][c] = h * acc;
      const double r = std::abs(z[i][c] - image[i][c]);
      res = std::isfinite(r) ? std::max(res, r) : std::numeric_limits<double>::infinity();
    }
  }
  return res;
}

}  // namespace

State step_gauss6(const OdeParams& p, const State& s, double h, double stage_tol, int max_iter) {
  const auto& tab = gauss6_tableau();
  const double scale = std::max({1.0, std::abs(s.u), std::abs(s.v)});
  const double target = stage_tol * scale;

  const Derivative f0 = rhs(p, s);
  Stages z{};
  for (int i = 0; i < 3; ++i) z[i] = {tab.c[i] * h * f0.du, tab.c[i] * h * f0.dv};

  constexpr int kSweeps = 10;
  bool converged = false;
  Stages image{};
  for (int it = 0; it < kSweeps && it < max_iter; ++it) {
    const double res = stage_map(p, s, h, z, image);
    if (!std::isfinite(res)) break;
    z = image;
    if (res <= target) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    // Damped Newton on G(Z) = Z - h*A*F(y+Z), 6 unknowns.
    if (!std::isfinite(z[0][0] + z[0][1] + z[1][0] + z[1][1] + z[2][0] + z[2][1])) {
      for (int i = 0; i < 3; ++i) z[i] = {tab.c[i] * h * f0.du, tab.c[i] * h * f0.dv};
    }
    double res = stage_map(p, s, h, z, image);
    for (int it = 0; it < max_iter; ++it) {
      if (res <= target) {
        converged = true;
        break;
      }
      Eigen::Matrix<double, 6, 6> jac = Eigen::Matrix<double, 6, 6>::Identity();
      Eigen::Matrix<double, 6, 1> g;
      for (int j = 0; j < 3; ++j) {
        const double u = s.u + z[j][0];
        const double v = s.v + z[j][1];
        // Jacobian of (v, A u v + B u^3) with respect to (u, v).
        const double j10 = p.A * v + 3.0 * p.B * u * u;
        const double j11 = p.A * u;
        for (int i = 0; i < 3; ++i) {
          const double ha = h * tab.a[i][j];
          jac(2 * i, 2 * j + 1) -= ha;
          jac(2 * i + 1, 2 * j) -= ha * j10;
          jac(2 * i + 1, 2 * j + 1) -= ha * j11;
        }
      }
      for (int i = 0; i < 3; ++i) {
        g(2 * i) = z[i][0] - image[i][0];
        g(2 * i + 1) = z[i][1] - image[i][1];
      }
      const Eigen::Matrix<double, 6, 1> dz = jac.partialPivLu().solve(-g);
      double lambda = 1.0;
      Stages trial{};
      Stages trial_image{};
      double trial_res = std::numeric_limits<double>::infinity();
      for (int damp = 0; damp < 12; ++damp) {
        for (int i = 0; i < 3; ++i) {
          trial[i] = {z[i][0] + lambda * dz(2 * i), z[i][1] + lambda * dz(2 * i + 1)};
        }
        trial_res = stage_map(p, s, h, trial, trial_image);
        if (trial_res < res) break;
        lambda *= 0.5;
      }
      if (!std::isfinite(trial_res)) break;
      z = trial;
      image = trial_image;
      res = trial_res;
    }
    if (!converged && res <= target) converged = true;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "step_gauss6: stage equations did not converge at t=" << s.t << " h=" << h;
    throw StageSolveFailure(msg.str());
  }

  const Stages f = stage_derivatives(p, s, z);
  double du = 0.0;
  double dv = 0.0;
  for (int j = 0; j < 3; ++j) {
    du += tab.b[j] * f[j][0];
    dv += tab.b[j] * f[j][1];
  }
  State out{s.t + h, s.u + h * du, s.v + h * dv};
  require_finite(out, "step_gauss6");
  return out;
}

State step(IntegratorKind kind, const OdeParams& p, const State& s, double h,
           const IntegrateOptions& opts) {
  if (kind == IntegratorKind::RK4) return step_rk4(p, s, h);
  return step_gauss6(p, s, h, opts.stage_tol, opts.stage_max_iter);
}

// ---------------------------------------------------------------------------
// Driver

namespace {

// Backward runs integrate the reversed system w(tau) = u(-tau), which obeys
// the same equation with A replaced by -A, and map states back afterwards.
State to_reversed(const State& s) { return {-s.t, s.u, -s.v}; }
State from_reversed(const State& s) { return {-s.t, s.u, -s.v}; }

bool over_threshold(const State& s, double threshold) {
  return std::abs(s.u) > threshold || std::abs(s.v) > threshold * threshold;
}

}  // namespace

Trajectory integrate(const OdeParams& p, const State& s0, IntegratorKind kind,
                     const IntegrateOptions& opts) {
  opts.validate();
  if (!is_finite(s0)) throw DomainError("integrate: initial state must be finite");

  Trajectory traj;
  traj.params = p;
  traj.integrator = kind;
  traj.options = opts;

  const int direction = opts.t_end >= s0.t ? 1 : -1;
  const OdeParams work = direction > 0 ? p : params_from_coeffs(-p.A, p.B);
  const auto to_work = [direction](const State& s) { return direction > 0 ? s : to_reversed(s); };
  const auto from_work = [direction](const State& s) {
    return direction > 0 ? s : from_reversed(s);
  };

  State cur = to_work(s0);
  const double tau0 = cur.t;
  const double tau_end = direction > 0 ? opts.t_end : -opts.t_end;
  traj.states.push_back(s0);
  if (over_threshold(s0, opts.blowup_threshold)) {
    traj.termination = BlowUp{s0.t, direction, s0.u >= 0.0 ? 1 : -1};
    return traj;
  }
  if (tau_end == tau0) return traj;

  const int order = order_of(kind);
  const double err_den = std::pow(2.0, order) - 1.0;
  const double expo = 1.0 / (order + 1.0);

  double h = std::min(opts.h0, opts.h_max);
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  bool last_recorded = true;

  auto record = [&](const State& s) {
    traj.states.push_back(from_work(s));
    last_recorded = true;
  };

  while (true) {
    if (attempts >= opts.max_steps) {
      if (!last_recorded) record(cur);
      traj.termination = MaxSteps{};
      return traj;
    }
    ++attempts;

    const double remaining = tau_end - cur.t;
    double trial = h;
    if (opts.adaptive) {
      trial = std::min(trial, opts.h_max);
      if (std::abs(cur.u) > 0.0) trial = std::min(trial, 0.1 / std::abs(cur.u));
    }
    bool last = false;
    // Snap onto the end when only rounding separates it from the step.
    if (trial >= remaining - 1e-9 * trial) {
      trial = remaining;
      last = true;
    }

    State next;
    if (opts.adaptive) {
      double err = 0.0;
      try {
        const State full = step(kind, work, cur, trial, opts);
        const State half = step(kind, work, cur, 0.5 * trial, opts);
        next = step(kind, work, half, 0.5 * trial, opts);
        const double eu = std::abs(next.u - full.u) / std::max(1.0, std::abs(next.u));
        const double ev = std::abs(next.v - full.v) / std::max(1.0, std::abs(next.v));
        err = std::max(eu, ev) / err_den;
      } catch (const NonFinite&) {
        err = std::numeric_limits<double>::infinity();
      } catch (const StageSolveFailure&) {
        err = std::numeric_limits<double>::infinity();
      }
      if (!(err <= opts.local_tol)) {
        const double factor =
            std::isfinite(err) ? std::clamp(0.9 * std::pow(opts.local_tol / err, expo), 0.1, 0.5)
                               : 0.5;
        h = trial * factor;
        if (h < opts.h_min) {
          if (!last_recorded) record(cur);
          traj.termination = StepUnderflow{from_work(cur).t};
          return traj;
        }
        continue;
      }
      const double grow =
          err > 0.0 ? std::clamp(0.9 * std::pow(opts.local_tol / err, expo), 0.2, 5.0) : 5.0;
      // A clipped final step says nothing about the natural step size.
      if (!last) h = trial * grow;
    } else {
      try {
        next = step(kind, work, cur, trial, opts);
      } catch (const Error&) {
        if (!last_recorded) record(cur);
        traj.termination = StepUnderflow{from_work(cur).t};
        return traj;
      }
      // Fixed grid: avoid accumulating rounding in t.
      next.t = tau0 + static_cast<double>(accepted + 1) * opts.h0;
    }
    if (last) next.t = tau_end;

    if (over_threshold(next, opts.blowup_threshold)) {
      if (!last_recorded) record(cur);
      double t_est = next.t;
      if (next.v != 0.0 && next.u / next.v > 0.0) t_est = next.t + next.u / next.v;
      traj.termination = BlowUp{direction > 0 ? t_est : -t_est, direction, next.u >= 0.0 ? 1 : -1};
      return traj;
    }

    cur = next;
    ++accepted;
    last_recorded = false;
    if (last || accepted % opts.record_every == 0) record(cur);
    if (last) {
      traj.termination = Completed{};
      return traj;
    }
  }
}

Trajectory integrate_two_sided(const OdeParams& p, const State& s0, IntegratorKind kind,
                               IntegrateOptions opts, double t_lo, double t_hi) {
  if (!(t_lo <= s0.t && s0.t <= t_hi)) {
    throw DomainError("integrate_two_sided: need t_lo <= t0 <= t_hi");
  }
  opts.t_end = t_lo;
  const Trajectory back = integrate(p, s0, kind, opts);
  opts.t_end = t_hi;
  const Trajectory fwd = integrate(p, s0, kind, opts);

  Trajectory out;
  out.params = p;
  out.integrator = kind;
  out.options = opts;
  out.states.assign(back.states.rbegin(), back.states.rend());
  out.origin = out.states.size() - 1;
  out.states.insert(out.states.end(), fwd.states.begin() + 1, fwd.states.end());
  if (!back.completed()) {
    out.termination = back.termination;
  } else {
    out.termination = fwd.termination;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blow-up time

double estimate_blowup_time(const Trajectory& traj) {
  if (!traj.blew_up()) throw FitFailure("estimate_blowup_time: trajectory did not blow up");
  constexpr double kTailFloor = 1e3;
  constexpr std::size_t kTailLength = 20;

  std::vector<const State*> tail;
  for (auto it = traj.states.rbegin(); it != traj.states.rend() && tail.size() < kTailLength;
       ++it) {
    if (std::abs(it->u) < kTailFloor) break;
    tail.push_back(&*it);
  }
  if (tail.size() < 4) {
    throw FitFailure("estimate_blowup_time: fewer than 4 tail samples with |u| >= 1e3");
  }

  // Least squares for 1/u = alpha + beta*(t - t_mean).
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (const State* s : tail) {
    t_mean += s->t;
    y_mean += 1.0 / s->u;
  }
  t_mean /= static_cast<double>(tail.size());
  y_mean /= static_cast<double>(tail.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const State* s : tail) {
    const double dx = s->t - t_mean;
    sxx += dx * dx;
    sxy += dx * (1.0 / s->u - y_mean);
  }
  if (!(sxx > 0.0)) throw FitFailure("estimate_blowup_time: tail samples share one time");
  const double beta = sxy / sxx;
  const double t_blow = t_mean - y_mean / beta;
  if (beta == 0.0 || !std::isfinite(t_blow)) {
    throw FitFailure("estimate_blowup_time: degenerate fit");
  }
  return t_blow;
}

double quadrature_blowup_time(double a_coef, double c, double a) {
  if (!(a_coef > 0.0) || !std::isfinite(a_coef) || !std::isfinite(c) || !std::isfinite(a)) {
    throw DomainError("quadrature_blowup_time: need finite inputs and a_coef > 0");
  }
  const double r0 = a_coef * a * a * a * a + c;
  if (r0 < 0.0) throw DomainError("quadrature_blowup_time: negative radicand at v = a");
  if (c < 0.0 && a <= 0.0) {
    throw DomainError("quadrature_blowup_time: radicand a_coef*v^4 + c is negative near v = 0");
  }
  if (c == 0.0 && a <= 0.0) {
    throw DomainError("quadrature_blowup_time: integrand is not integrable at v = 0");
  }
  const double a2 = a * a;
  const double a3 = a2 * a;
  // v = a + x^2/(1 - x^2) maps (0,1) onto (a, inf); the Jacobian cancels both
  // the 1/sqrt endpoint singularity (when r0 = 0) and the v^-2 tail.
  const auto integrand = [=](double x) {
    const double one_minus = (1.0 - x) * (1.0 + x);
    const double d = x * x / one_minus;
    const double radicand =
        r0 + a_coef * d * (4.0 * a3 + d * (6.0 * a2 + d * (4.0 * a + d)));
    const double jac = 2.0 * x / (one_minus * one_minus);
    return jac / std::sqrt(std::max(radicand, 0.0));
  };
  const quad::Result res = quad::gauss_kronrod(integrand, 0.0, 1.0, 1e-13, 1e-14);
  return res.value;
}

}  // namespace blowuplab
