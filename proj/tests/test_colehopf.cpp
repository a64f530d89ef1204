#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "blowuplab/closed_forms.hpp"
#include "blowuplab/colehopf.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/integrate.hpp"

using namespace blowuplab;
using namespace blowuplab::colehopf;

namespace {

Trajectory fixed_two_sided(const OdeParams& p, State s0, double lo, double hi, double h) {
  IntegrateOptions opts;
  opts.adaptive = false;
  opts.h0 = h;
  return integrate_two_sided(p, s0, IntegratorKind::Gauss6, opts, lo, hi);
}

ProfileF sampled(double lo, double hi, int n, double (*f)(double)) {
  ProfileF pr;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    pr.x.push_back(x);
    pr.f.push_back(f(x));
  }
  return pr;
}

ProfileF scaled(ProfileF pr, double lambda) {
  for (double& f : pr.f) f *= lambda;
  pr.C *= lambda;
  return pr;
}

}  // namespace

TEST_CASE("reconstruction of the sech profile") {
  const OdeParams m4 = params_from_dimension(4);
  IntegrateOptions opts;
  const Trajectory tr =
      integrate_two_sided(m4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, opts, -5.0, 5.0);
  const ProfileF pr = reconstruct_f(tr, 1.0);
  REQUIRE(pr.x.size() == tr.states.size());
  CHECK(pr.C == 1.0);
  CHECK(pr.x_anchor == 0.0);
  for (std::size_t i = 0; i < pr.x.size(); ++i) {
    const double ref = closed_forms::sech_profile(1.0, 1.0, 0.0, pr.x[i]);
    CHECK(std::abs(pr.f[i] / ref - 1.0) <= 1e-6);
  }
}

TEST_CASE("reconstruction edge cases") {
  const OdeParams m4 = params_from_dimension(4);
  IntegrateOptions opts;
  opts.t_end = 3.0;
  const Trajectory flat = integrate(m4, State{0.0, 0.0, 0.0}, IntegratorKind::RK4, opts);
  const ProfileF pr = reconstruct_f(flat, 2.0);
  for (double f : pr.f) CHECK(f == 2.0);

  const OdeParams m3 = params_from_dimension(3);
  const Trajectory global =
      integrate_two_sided(m3, State{0.0, 0.0, -0.5}, IntegratorKind::RK4, {}, -200.0, 200.0);
  const ProfileF g = reconstruct_f(global, 1.0);
  for (double f : g.f) CHECK(f > 0.0);
  // Flat ends: f' = u f has died out at both ends.
  const std::size_t n = g.f.size();
  CHECK(std::abs(global.states.front().u) <= 1e-2);
  CHECK(std::abs(global.states.back().u) <= 1e-2);
  CHECK(std::abs(g.f[1] - g.f[0]) <= 1e-2 * g.f[0]);
  CHECK(std::abs(g.f[n - 1] - g.f[n - 2]) <= 1e-2 * g.f[n - 1]);
  CHECK(std::isfinite(g.f.front()));
  CHECK(std::isfinite(g.f.back()));

  CHECK_THROWS_AS(reconstruct_f(global, 0.0), DomainError);
  opts.t_end = 10.0;
  const Trajectory blown =
      integrate(params_from_dimension(8), State{0.0, 1.0, 1.0}, IntegratorKind::RK4, opts);
  CHECK_THROWS_AS(reconstruct_f(blown, 1.0), BlownUpTrajectory);
}

TEST_CASE("pointwise residual of the u-equation") {
  for (double m : {3.0, 5.0, 9.0}) {
    const OdeParams p = params_from_dimension(m);
    for (const State s : {State{0.0, 0.3, -1.2}, State{0.0, -2.0, 0.5}}) {
      const double a = rhs(p, s).dv;
      CHECK(std::abs(eq0_residual_from_u(m, s.u, s.v, a)) <= 1e-14 * std::max(1.0, std::abs(a)));
    }
  }
  CHECK(eq0_residual_from_u(3.0, 1.0, 1.0, 0.0) == doctest::Approx(-3.0));
  CHECK(eq0_residual_from_u(8.0, 1.0, 0.0, 2.0 / 9.0) == doctest::Approx(0.0));
}

TEST_CASE("profile residual by finite differences") {
  const ProfileF sech =
      sampled(-3.0, 3.0, 6001, [](double x) { return 1.0 / std::cosh(x); });
  CHECK(eq0_residual_fd(sech, 4.0) <= 1e-6);

  const ProfileF flat = sampled(0.0, 1.0, 11, [](double) { return 3.5; });
  CHECK(eq0_residual_fd(flat, 5.0) == 0.0);

  const OdeParams m3 = params_from_dimension(3);
  const Trajectory tr = fixed_two_sided(m3, State{0.0, 0.0, -0.5}, -20.0, 20.0, 1e-3);
  REQUIRE(tr.completed());
  const ProfileF pr = reconstruct_f(tr, 1.0);
  CHECK(eq0_residual_fd(pr, 3.0) <= 1e-5);
  // The same profile is not a solution for another dimension.
  CHECK(eq0_residual_fd(pr, 5.0) > 1e-3);

  ProfileF short_pr = sampled(0.0, 1.0, 6, [](double) { return 1.0; });
  CHECK_THROWS_AS(eq0_residual_fd(short_pr, 4.0), InsufficientSamples);
  ProfileF bent = sampled(0.0, 1.0, 11, [](double) { return 1.0; });
  bent.x[5] += 0.01;
  CHECK_THROWS_AS(eq0_residual_fd(bent, 4.0), NonUniformGrid);
}

TEST_CASE("u survives the round trip through f") {
  for (double m : {3.0, 4.0}) {
    const OdeParams p = params_from_dimension(m);
    const Trajectory tr = fixed_two_sided(p, State{0.0, 0.0, -0.5}, -5.0, 5.0, 1e-3);
    const ProfileF pr = reconstruct_f(tr, 1.0);
    const std::vector<double> u = log_derivative(pr);
    REQUIRE(u.size() == tr.states.size());
    CHECK(std::isnan(u[0]));
    CHECK(std::isnan(u[1]));
    CHECK(std::isnan(u[u.size() - 1]));
    for (std::size_t i = 2; i + 2 < u.size(); ++i) {
      CHECK(std::abs(u[i] - tr.states[i].u) <= 1e-6);
    }
  }
}

TEST_CASE("the profile residual ignores the scale of f") {
  const OdeParams m3 = params_from_dimension(3);
  const Trajectory tr = fixed_two_sided(m3, State{0.0, 0.0, -0.5}, -10.0, 10.0, 1e-2);
  const ProfileF pr = reconstruct_f(tr, 1.0);
  const double base = eq0_residual_fd(pr, 3.0);
  // Rescaling only changes the rounding of the samples, which the third
  // difference turns into about eps / h^3.
  const double h = 1e-2;
  const double rounding = 10.0 * std::numeric_limits<double>::epsilon() / (h * h * h);
  for (double lambda : {0.5, 7.0}) {
    const double r = eq0_residual_fd(scaled(pr, lambda), 3.0);
    CAPTURE(lambda);
    CHECK(std::abs(r - base) <= rounding);
  }
  CHECK(eq0_residual_fd(scaled(pr, 0.5), 3.0) == base);  // exact in binary
}

TEST_CASE("coefficients of the reduction") {
  for (double m : {3.0, 4.0, 5.0, 8.0, 9.0, 17.0}) {
    const double a = 2.0 * (m + 1.0) / (m - 2.0);
    const double c = m * m / ((m - 2.0) * (m - 2.0));
    CHECK(std::abs((3.0 - a) - (m - 8.0) / (m - 2.0)) <= 1e-12);
    CHECK(std::abs((1.0 - a + c) + 2.0 * (m - 4.0) / ((m - 2.0) * (m - 2.0))) <= 1e-12);
    // and they are the model's coefficients with the sign of the u u' term flipped
    const OdeParams p = params_from_dimension(m);
    CHECK(std::abs((m - 8.0) / (m - 2.0) + p.A) <= 1e-12);
    CHECK(std::abs(2.0 * (m - 4.0) / ((m - 2.0) * (m - 2.0)) - p.B) <= 1e-12);
  }
}
