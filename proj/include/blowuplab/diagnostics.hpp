#pragma once

#include <vector>

#include "blowuplab/integrate.hpp"
#include "blowuplab/model.hpp"

namespace blowuplab::diagnostics {

// Two scalar observables along solutions:
//   e(u)   = u'^2/2 - (B/4) u^4,   de/dt = A u u'^2
//   g_k(u) = u' + k u^2,           dg_k/dt = (A + 2k) u g_k  when 2k^2 + A k - B = 0
// so g_k(t) = g_k(0) exp((A + 2k) * int_0^t u), and sign(g_k) is invariant.

inline double energy(const OdeParams& p, const State& s) {
  return 0.5 * s.v * s.v - 0.25 * p.B * s.u * s.u * s.u * s.u;
}

inline double g_k(const State& s, double k) { return s.v + k * s.u * s.u; }

/// Cumulative integral of u over the recorded states, starting at states[from]
/// (entries before `from` are integrated backwards, i.e. negative). Each
/// interval uses the quintic Hermite interpolant built from u, u' and u''.
std::vector<double> cumulative_integral_u(const OdeParams& p, const std::vector<State>& states,
                                          std::size_t from = 0);

/// Max over interior states of |de/dt - A u v^2| / max(1, |e|), with de/dt
/// from the three-point derivative on the (possibly nonuniform) grid.
/// Throws InsufficientData for fewer than 3 states.
double check_energy_law(const OdeParams& p, const Trajectory& traj);

/// Max over states of |g_k(t) - g_k(0) exp((A+2k) int_0^t u)| divided by
/// max(1, |g_k(0)|, |v(t)| + |k| u(t)^2). Throws NotACharacteristicRoot if
/// |2k^2 + A k - B| > 1e-10, InsufficientData for fewer than 2 states.
double check_gk_identity(const OdeParams& p, const Trajectory& traj, double k);

/// Max over states of |e(t) - e(0)| / max(|e(0)|, v^2/2 + |B| u^4 / 4).
double energy_drift_rel(const OdeParams& p, const Trajectory& traj);

struct DiagnosticsReport {
  double energy_law_residual_max = 0.0;
  double gk_identity_residual_max = 0.0;  // over both real roots; 0 if none
  double energy_drift_rel = 0.0;          // only meaningful when A = 0
  double eq0_residual_max = 0.0;          // filled by colehopf
};

DiagnosticsReport diagnose(const OdeParams& p, const Trajectory& traj);

}  // namespace blowuplab::diagnostics
