#include "blowuplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "blowuplab/errors.hpp"

namespace blowuplab::diagnostics {

namespace {

// Exact for quintics: uses u, u' and u'' = rhs at both ends.
double hermite_interval(const OdeParams& p, const State& a, const State& b) {
  const double h = b.t - a.t;
  const double wa = rhs(p, a).dv;
  const double wb = rhs(p, b).dv;
  return 0.5 * h * (a.u + b.u) + h * h / 10.0 * (a.v - b.v) + h * h * h / 120.0 * (wa + wb);
}

}  // namespace

std::vector<double> cumulative_integral_u(const OdeParams& p, const std::vector<State>& states,
                                          std::size_t from) {
  std::vector<double> out(states.size(), 0.0);
  if (states.empty()) return out;
  if (from >= states.size()) throw InsufficientData("cumulative_integral_u: anchor out of range");
  for (std::size_t i = from + 1; i < states.size(); ++i) {
    out[i] = out[i - 1] + hermite_interval(p, states[i - 1], states[i]);
  }
  for (std::size_t i = from; i-- > 0;) {
    out[i] = out[i + 1] - hermite_interval(p, states[i], states[i + 1]);
  }
  return out;
}

double check_energy_law(const OdeParams& p, const Trajectory& traj) {
  const auto& s = traj.states;
  if (s.size() < 3) throw InsufficientData("check_energy_law: need at least 3 states");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double h1 = s[i].t - s[i - 1].t;
    const double h2 = s[i + 1].t - s[i].t;
    const double e0 = energy(p, s[i - 1]);
    const double e1 = energy(p, s[i]);
    const double e2 = energy(p, s[i + 1]);
    const double de = -h2 / (h1 * (h1 + h2)) * e0 + (h2 - h1) / (h1 * h2) * e1 +
                      h1 / (h2 * (h1 + h2)) * e2;
    const double law = p.A * s[i].u * s[i].v * s[i].v;
    worst = std::max(worst, std::abs(de - law) / std::max(1.0, std::abs(e1)));
  }
  return worst;
}

double check_gk_identity(const OdeParams& p, const Trajectory& traj, double k) {
  if (std::abs(characteristic_residual(p, k)) > 1e-10) {
    throw NotACharacteristicRoot("check_gk_identity: k is not a root of 2k^2 + A k - B");
  }
  const auto& s = traj.states;
  if (s.size() < 2) throw InsufficientData("check_gk_identity: need at least 2 states");
  const std::size_t origin = traj.origin;
  const std::vector<double> integral = cumulative_integral_u(p, s, origin);
  const double g0 = g_k(s[origin], k);
  const double rate = p.A + 2.0 * k;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double predicted = g0 * std::exp(rate * integral[i]);
    const double scale =
        std::max({1.0, std::abs(g0), std::abs(s[i].v) + std::abs(k) * s[i].u * s[i].u});
    worst = std::max(worst, std::abs(g_k(s[i], k) - predicted) / scale);
  }
  return worst;
}

double energy_drift_rel(const OdeParams& p, const Trajectory& traj) {
  const auto& s = traj.states;
  if (s.empty()) throw InsufficientData("energy_drift_rel: empty trajectory");
  const double e0 = energy(p, s[traj.origin]);
  double worst = 0.0;
  for (const State& st : s) {
    const double terms = 0.5 * st.v * st.v + 0.25 * std::abs(p.B) * std::pow(st.u, 4);
    const double scale = std::max(std::abs(e0), terms);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(energy(p, st) - e0) / scale);
  }
  return worst;
}

DiagnosticsReport diagnose(const OdeParams& p, const Trajectory& traj) {
  DiagnosticsReport report;
  if (traj.states.size() >= 3) report.energy_law_residual_max = check_energy_law(p, traj);
  if (p.has_real_roots() && traj.states.size() >= 2) {
    report.gk_identity_residual_max = std::max(check_gk_identity(p, traj, *p.k_minus),
                                               check_gk_identity(p, traj, *p.k_plus));
  }
  if (!traj.states.empty()) report.energy_drift_rel = energy_drift_rel(p, traj);
  return report;
}

}  // namespace blowuplab::diagnostics
