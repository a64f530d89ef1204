#include "blowuplab/colehopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowuplab/diagnostics.hpp"
#include "blowuplab/errors.hpp"

namespace blowuplab::colehopf {

namespace {

constexpr double kFdSpacing = 5e-3;

double uniform_spacing(const ProfileF& profile, std::size_t min_samples) {
  const auto& x = profile.x;
  if (x.size() < min_samples || profile.f.size() != x.size()) {
    throw InsufficientSamples("profile needs at least " + std::to_string(min_samples) +
                              " samples");
  }
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-6 * std::abs(h)) {
      throw NonUniformGrid("profile grid is not uniform near x = " + std::to_string(x[i]));
    }
  }
  return h;
}

}  // namespace

ProfileF reconstruct_f(const Trajectory& traj, double C) {
  if (!(C > 0.0)) throw DomainError("reconstruct_f: C must be > 0");
  if (!traj.completed()) {
    throw BlownUpTrajectory("reconstruct_f: trajectory terminated with " +
                            termination_name(traj.termination));
  }
  const std::vector<double> integral = diagnostics::cumulative_integral_u(
      traj.params, traj.states, traj.origin);
  ProfileF out;
  out.C = C;
  out.x_anchor = traj.states[traj.origin].t;
  out.x.reserve(traj.states.size());
  out.f.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out.x.push_back(traj.states[i].t);
    out.f.push_back(C * std::exp(integral[i]));
  }
  return out;
}

double eq0_residual_from_u(double m, double u, double v, double a) {
  return a + (m - 8.0) / (m - 2.0) * u * v - 2.0 * (m - 4.0) / ((m - 2.0) * (m - 2.0)) * u * u * u;
}

double eq0_residual_fd(const ProfileF& profile, double m) {
  const double h = uniform_spacing(profile, 7);
  const auto& f = profile.f;
  // The third difference amplifies sample rounding like eps/H^3; below about
  // 5e-3 that outgrows the O(H^4) truncation, so dense grids are strided.
  const std::size_t max_stride = (f.size() - 1) / 6;
  const std::size_t s = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(kFdSpacing / std::abs(h))), 1, max_stride);
  const double H = h * static_cast<double>(s);
  const double c2 = 2.0 * (m + 1.0) / (m - 2.0);
  const double c3 = m * m / ((m - 2.0) * (m - 2.0));
  double worst = 0.0;
  for (std::size_t i = 3 * s; i + 3 * s < f.size(); ++i) {
    const double fp1 = f[i + s], fm1 = f[i - s];
    const double fp2 = f[i + 2 * s], fm2 = f[i - 2 * s];
    const double fp3 = f[i + 3 * s], fm3 = f[i - 3 * s];
    const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * H);
    const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f[i] + 16.0 * fm1 - fm2) / (12.0 * H * H);
    const double d3 = (-fp3 + 8.0 * fp2 - 13.0 * fp1 + 13.0 * fm1 - 8.0 * fm2 + fm3) / (8.0 * H * H * H);
    const double residual = f[i] * f[i] * d3 - c2 * f[i] * d1 * d2 + c3 * d1 * d1 * d1;
    const double u = d1 / f[i];
    const double scale = f[i] * f[i] * f[i] * std::pow(std::max(1.0, std::abs(u)), 3);
    worst = std::max(worst, std::abs(residual) / scale);
  }
  return worst;
}

std::vector<double> log_derivative(const ProfileF& profile) {
  const double h = uniform_spacing(profile, 5);
  const auto& f = profile.f;
  std::vector<double> u(f.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 2; i + 2 < f.size(); ++i) {
    const double d1 = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    u[i] = d1 / f[i];
  }
  return u;
}

}  // namespace blowuplab::colehopf
