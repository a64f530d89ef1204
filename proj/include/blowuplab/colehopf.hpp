#pragma once

#include <vector>

#include "blowuplab/integrate.hpp"

namespace blowuplab::colehopf {

// With f' = u f the third-order profile equation
//   f^2 f''' - 2 (m+1)/(m-2) f f' f'' + m^2/(m-2)^2 f'^3 = 0
// divided by f^3 becomes
//   u'' + (m-8)/(m-2) u u' - 2(m-4)/(m-2)^2 u^3 = 0,
// and f = C exp(int u) is a positive solution for every C > 0.

struct ProfileF {
  std::vector<double> x;
  std::vector<double> f;  // > 0
  double C = 1.0;         // value of f at the anchor
  double x_anchor = 0.0;  // where the integral of u starts
};

/// f(x_i) = C exp(int_{x_anchor}^{x_i} u), anchored at traj.states[traj.origin].
/// Throws BlownUpTrajectory unless the trajectory completed, DomainError if C <= 0.
ProfileF reconstruct_f(const Trajectory& traj, double C);

/// Residual of the u-equation at (u, v = u', a = u'') for dimension m.
double eq0_residual_from_u(double m, double u, double v, double a);

/// Max over interior points of the profile-equation residual, with f', f'',
/// f''' from 4th-order central differences, normalized by f^3 max(1,|f'/f|)^3.
/// Grids finer than 5e-3 are differenced with a stride of several samples.
/// Throws InsufficientSamples below 7 samples, NonUniformGrid when spacing varies.
double eq0_residual_fd(const ProfileF& profile, double m);

/// u = f'/f recovered by 4th-order central differences at interior points
/// (first and last two entries are left as NaN).
std::vector<double> log_derivative(const ProfileF& profile);

}  // namespace blowuplab::colehopf
