#include <doctest.h>

#include <cmath>
#include <vector>

#include "blowuplab/closed_forms.hpp"
#include "blowuplab/diagnostics.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/integrate.hpp"
#include "oracles.hpp"

using namespace blowuplab;

namespace {

const OdeParams kM3 = params_from_dimension(3);
const OdeParams kM4 = params_from_dimension(4);
const OdeParams kM5 = params_from_dimension(5);
const OdeParams kM8 = params_from_dimension(8);

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    mx += std::log(hs[i]);
    my += std::log(errs[i]);
  }
  mx /= hs.size();
  my /= hs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    sxy += (std::log(hs[i]) - mx) * (std::log(errs[i]) - my);
    sxx += (std::log(hs[i]) - mx) * (std::log(hs[i]) - mx);
  }
  return sxy / sxx;
}

double tanh_endpoint_error(IntegratorKind kind, double h) {
  IntegrateOptions opts;
  opts.adaptive = false;
  opts.h0 = h;
  opts.t_end = 2.0;
  opts.stage_tol = 1e-15;
  const Trajectory tr = integrate(kM4, State{0.0, 0.0, -1.0}, kind, opts);
  return std::abs(tr.states.back().u + std::tanh(2.0));
}

void check_trajectory_invariants(const Trajectory& tr) {
  const double thr = tr.options.blowup_threshold;
  const int dir = tr.options.t_end >= tr.states.front().t ? 1 : -1;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const State& s = tr.states[i];
    CHECK(is_finite(s));
    CHECK(std::abs(s.u) <= thr);
    CHECK(std::abs(s.v) <= thr * thr);
    if (i > 0) CHECK(dir * (s.t - tr.states[i - 1].t) > 0.0);
  }
  if (const auto* b = std::get_if<BlowUp>(&tr.termination)) {
    CHECK(b->direction == dir);
    CHECK(dir * (b->t_estimate - tr.states.back().t) >= 0.0);
  }
}

}  // namespace

TEST_CASE("integrator names") {
  CHECK(to_string(IntegratorKind::RK4) == "rk4");
  CHECK(parse_integrator("Gauss6") == IntegratorKind::Gauss6);
  CHECK(parse_integrator("rk4") == IntegratorKind::RK4);
  CHECK_THROWS_AS(parse_integrator("euler"), DomainError);
  CHECK(order_of(IntegratorKind::RK4) == 4);
  CHECK(order_of(IntegratorKind::Gauss6) == 6);
}

TEST_CASE("RK4 single steps") {
  State s = step_rk4(kM3, State{0.0, 0.0, 0.0}, 0.1);
  CHECK(s.t == doctest::Approx(0.1));
  CHECK(s.u == 0.0);
  CHECK(s.v == 0.0);

  s = step_rk4(params_from_coeffs(2.0, 0.0), State{0.0, 0.0, -1.0}, 1e-3);
  CHECK(std::abs(s.u + std::tanh(1e-3)) <= 1e-14);

  s = step_rk4(params_from_coeffs(0.0, 2.0 / 9.0), State{0.0, 1.0, 1.0 / 3.0}, 1e-3);
  CHECK(std::abs(s.u - 1.0 / (1.0 - 1e-3 / 3.0)) <= 1e-14);

  CHECK_THROWS_AS(step_rk4(kM8, State{0.0, 1e120, 1e120}, 1.0), NonFinite);
}

TEST_CASE("Gauss6 single steps") {
  for (double h : {0.5, -0.3, 1e-4}) {
    const State s = step_gauss6(kM5, State{0.0, 0.0, 0.0}, h);
    CHECK(s.t == h);
    CHECK(s.u == 0.0);
    CHECK(s.v == 0.0);
  }
  const State s = step_gauss6(params_from_coeffs(2.0, 0.0), State{0.0, 0.0, -1.0}, 0.1);
  CHECK(std::abs(s.u + std::tanh(0.1)) <= 1e-9);

  // A step across the pole of 1/(1 - t/3) has no stage solution close by.
  CHECK_THROWS_AS(step_gauss6(kM8, State{0.0, 1.0, 1.0 / 3.0}, 6.0, 1e-13, 3), StageSolveFailure);
}

TEST_CASE("Gauss6 tableau satisfies the order conditions up to order 6") {
  const auto& t = gauss6_tableau();
  // B(6): quadrature order of the weights
  for (int k = 1; k <= 6; ++k) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += t.b[i] * std::pow(t.c[i], k - 1);
    CAPTURE(k);
    CHECK(std::abs(sum - 1.0 / k) <= 1e-15);
  }
  // C(3): stage order
  for (int i = 0; i < 3; ++i) {
    for (int k = 1; k <= 3; ++k) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += t.a[i][j] * std::pow(t.c[j], k - 1);
      CHECK(std::abs(sum - std::pow(t.c[i], k) / k) <= 1e-15);
    }
  }
  // D(3)
  for (int j = 0; j < 3; ++j) {
    for (int k = 1; k <= 3; ++k) {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) sum += t.b[i] * std::pow(t.c[i], k - 1) * t.a[i][j];
      CHECK(std::abs(sum - t.b[j] * (1.0 - std::pow(t.c[j], k)) / k) <= 1e-15);
    }
  }
  // Two tree conditions spelled out: sum b_i a_ij c_j = 1/6 and sum b_i c_i a_ij a_jk c_k = 1/30.
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s1 += t.b[i] * t.a[i][j] * t.c[j];
      for (int k = 0; k < 3; ++k) s2 += t.b[i] * t.c[i] * t.a[i][j] * t.a[j][k] * t.c[k];
    }
  }
  CHECK(std::abs(s1 - 1.0 / 6.0) <= 1e-15);
  CHECK(std::abs(s2 - 1.0 / 30.0) <= 1e-15);
}

TEST_CASE("convergence orders on the tanh solution") {
  const std::vector<double> hs{0.1, 0.05, 0.025};
  for (IntegratorKind kind : {IntegratorKind::RK4, IntegratorKind::Gauss6}) {
    std::vector<double> errs;
    for (double h : hs) errs.push_back(tanh_endpoint_error(kind, h));
    const double p = fitted_order(hs, errs);
    CAPTURE(to_string(kind));
    CAPTURE(p);
    CHECK(std::abs(p - order_of(kind)) <= 0.3);
  }
}

TEST_CASE("integrate reproduces the closed forms") {
  IntegrateOptions opts;
  opts.t_end = 5.0;
  Trajectory tr = integrate(kM4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, opts);
  CHECK(tr.completed());
  CHECK(std::abs(tr.states.back().u + std::tanh(5.0)) <= 1e-7);
  CHECK(tr.states.back().t == 5.0);
  check_trajectory_invariants(tr);

  opts.t_end = 10.0;
  tr = integrate(kM8, State{0.0, 1.0, 1.0 / 3.0}, IntegratorKind::RK4, opts);
  REQUIRE(tr.blew_up());
  CHECK(std::abs(estimate_blowup_time(tr) / 3.0 - 1.0) <= 0.01);
  CHECK(std::abs(std::get<BlowUp>(tr.termination).t_estimate / 3.0 - 1.0) <= 0.01);
  check_trajectory_invariants(tr);

  opts.t_end = 200.0;
  tr = integrate(kM3, State{0.0, 0.0, -0.5}, IntegratorKind::RK4, opts);
  CHECK(tr.completed());
  CHECK(std::abs(tr.states.back().u) <= 1e-2);
}

TEST_CASE("escape of the m = 8 energy branch matches its quadrature") {
  IntegrateOptions opts;
  opts.t_end = 10.0;
  const double v0 = std::sqrt((16.0 - 1.0) / 9.0);
  const Trajectory tr = integrate(kM8, State{0.0, 2.0, v0}, IntegratorKind::RK4, opts);
  REQUIRE(tr.blew_up());
  CHECK(std::abs(estimate_blowup_time(tr) / oracle::kM8EscapeFromTwo - 1.0) <= 1e-4);
}

TEST_CASE("blow-up time on the reciprocal-tanh branch") {
  const State s0{0.0, 2.0, 1.0};
  const auto branch = closed_forms::m4_branch(kM4, s0.u, s0.v);
  CHECK(closed_forms::name_of(branch) == "RecipTanhBranch");
  const auto pole = closed_forms::pole_towards(branch, kM4, 1.0);
  REQUIRE(pole.has_value());
  IntegrateOptions opts;
  opts.t_end = 10.0;
  const Trajectory tr = integrate(kM4, s0, IntegratorKind::RK4, opts);
  REQUIRE(tr.blew_up());
  CHECK(std::abs(estimate_blowup_time(tr) / *pole - 1.0) <= 0.02);
}

TEST_CASE("blow-up time on the tangent branch") {
  const State s0{0.0, 0.0, 1.0};
  const auto branch = closed_forms::m4_branch(kM4, s0.u, s0.v);
  CHECK(closed_forms::name_of(branch) == "TanBranch");
  const auto pole = closed_forms::pole_towards(branch, kM4, 1.0);
  REQUIRE(pole.has_value());
  CHECK(*pole == doctest::Approx(std::numbers::pi / 2.0));
  IntegrateOptions opts;
  opts.t_end = 10.0;
  const Trajectory tr = integrate(kM4, s0, IntegratorKind::Gauss6, opts);
  REQUIRE(tr.blew_up());
  CHECK(std::abs(estimate_blowup_time(tr) / *pole - 1.0) <= 0.02);
}

TEST_CASE("blow-up estimate needs a blow-up") {
  IntegrateOptions opts;
  opts.t_end = 1.0;
  const Trajectory tr = integrate(kM4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, opts);
  CHECK_THROWS_AS(estimate_blowup_time(tr), FitFailure);
}

TEST_CASE("backward runs use the reversed system") {
  IntegrateOptions opts;
  opts.t_end = -5.0;
  const Trajectory tr = integrate(kM4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, opts);
  CHECK(tr.completed());
  CHECK(std::abs(tr.states.back().u + std::tanh(-5.0)) <= 1e-7);
  check_trajectory_invariants(tr);

  // -u(-t) of the forward rational solution: u = 1/(1 + t/3) blows up at t = -3.
  opts.t_end = -10.0;
  const Trajectory back = integrate(kM8, State{0.0, 1.0, -1.0 / 3.0}, IntegratorKind::RK4, opts);
  REQUIRE(back.blew_up());
  CHECK(std::get<BlowUp>(back.termination).direction == -1);
  CHECK(std::abs(estimate_blowup_time(back) / -3.0 - 1.0) <= 0.01);
  check_trajectory_invariants(back);
}

TEST_CASE("two-sided runs") {
  const Trajectory tr =
      integrate_two_sided(kM4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, {}, -5.0, 5.0);
  CHECK(tr.completed());
  CHECK(tr.states[tr.origin].t == 0.0);
  CHECK(tr.states.front().t == -5.0);
  CHECK(tr.states.back().t == 5.0);
  for (std::size_t i = 1; i < tr.states.size(); ++i) CHECK(tr.states[i].t > tr.states[i - 1].t);
  CHECK_THROWS_AS(integrate_two_sided(kM4, State{0.0, 0.0, -1.0}, IntegratorKind::RK4, {}, 1.0, 5.0),
                  DomainError);
}

TEST_CASE("fixed steps lie on a uniform grid") {
  IntegrateOptions opts;
  opts.adaptive = false;
  opts.h0 = 1e-3;
  opts.t_end = 1.0;
  const Trajectory tr = integrate(kM3, State{0.0, 0.0, -0.5}, IntegratorKind::RK4, opts);
  REQUIRE(tr.states.size() == 1001);
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    CHECK(std::abs(tr.states[i].t - 1e-3 * static_cast<double>(i)) <= 1e-15);
  }
}

TEST_CASE("thinning keeps the final state") {
  IntegrateOptions opts;
  opts.t_end = 3.0;
  opts.record_every = 7;
  const Trajectory dense = integrate(kM4, State{0.0, 0.3, -1.0}, IntegratorKind::RK4, IntegrateOptions{.t_end = 3.0});
  const Trajectory thin = integrate(kM4, State{0.0, 0.3, -1.0}, IntegratorKind::RK4, opts);
  CHECK(thin.states.size() < dense.states.size());
  CHECK(thin.states.back().t == 3.0);
  CHECK(thin.states.back().u == dense.states.back().u);
}

TEST_CASE("termination records") {
  IntegrateOptions opts;
  opts.t_end = 100.0;
  opts.max_steps = 10;
  Trajectory tr = integrate(kM3, State{0.0, 0.0, -0.5}, IntegratorKind::RK4, opts);
  CHECK(std::holds_alternative<MaxSteps>(tr.termination));
  CHECK(termination_name(tr.termination) == "MaxSteps");

  // A tolerance below rounding can never be met.
  opts = IntegrateOptions{};
  opts.t_end = 1.0;
  opts.local_tol = 1e-30;
  opts.h_min = 1e-6;
  tr = integrate(kM3, State{0.0, 0.0, -0.5}, IntegratorKind::RK4, opts);
  REQUIRE(std::holds_alternative<StepUnderflow>(tr.termination));
  CHECK(std::get<StepUnderflow>(tr.termination).t_last == 0.0);
  CHECK(termination_name(tr.termination) == "StepUnderflow");

  opts = IntegrateOptions{};
  opts.t_end = 1.0;
  opts.blowup_threshold = 1.0;
  tr = integrate(kM8, State{0.0, 2.0, 0.0}, IntegratorKind::RK4, opts);
  CHECK(tr.blew_up());
  CHECK(tr.states.size() == 1);
}

TEST_CASE("invalid options name the field") {
  auto message = [](IntegrateOptions o) {
    try {
      o.validate();
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  IntegrateOptions o;
  CHECK(message(o).empty());
  o.h0 = 0.0;
  CHECK(message(o).find("h0") != std::string::npos);
  o = {};
  o.blowup_threshold = -1.0;
  CHECK(message(o).find("blowup_threshold") != std::string::npos);
  o = {};
  o.local_tol = 0.0;
  CHECK(message(o).find("local_tol") != std::string::npos);
  o = {};
  o.record_every = 0;
  CHECK(message(o).find("record_every") != std::string::npos);
  o = {};
  o.max_steps = 0;
  CHECK(message(o).find("max_steps") != std::string::npos);
  o = {};
  o.t_end = std::nan("");
  CHECK(message(o).find("t_end") != std::string::npos);
  CHECK_THROWS_AS(integrate(kM3, State{0.0, std::nan(""), 0.0}, IntegratorKind::RK4, {}),
                  DomainError);
}

TEST_CASE("Gauss6 keeps the m = 8 energy up to 0.9 of the blow-up time") {
  IntegrateOptions opts;
  opts.t_end = 0.9 * oracle::kM8EscapeFromRest;
  opts.local_tol = 1e-13;
  const Trajectory tr = integrate(kM8, State{0.0, 1.0, 0.0}, IntegratorKind::Gauss6, opts);
  REQUIRE(tr.completed());
  CHECK(diagnostics::energy_drift_rel(kM8, tr) <= 1e-10);
  // Against |e(0)| alone the bound is looser: e is a small difference of two
  // growing terms near the end of the run.
  const double e0 = diagnostics::energy(kM8, tr.states.front());
  double drift = 0.0;
  for (const State& s : tr.states) drift = std::max(drift, std::abs(diagnostics::energy(kM8, s) - e0));
  CHECK(drift / std::abs(e0) <= 1e-8);
}

TEST_CASE("comparison bound for m = 5") {
  const double kp = *kM5.k_plus;
  for (const State s0 : {State{0.0, -1.0, -1.0}, State{0.0, -0.5, -0.2}, State{0.0, -2.0, -0.7}}) {
    REQUIRE(diagnostics::g_k(s0, kp) < 0.0);
    IntegrateOptions opts;
    opts.t_end = 100.0;
    const Trajectory tr = integrate(kM5, s0, IntegratorKind::RK4, opts);
    REQUIRE(tr.blew_up());
    CHECK(estimate_blowup_time(tr) < -1.0 / (kp * s0.u));
    for (const State& s : tr.states) {
      const double bound = s0.u / (1.0 + kp * s0.u * s.t);
      CHECK(s.u <= bound + 1e-9 * std::abs(bound));
    }
  }
}

TEST_CASE("forward then backward returns to the start on a global m = 3 solution") {
  IntegrateOptions opts;
  // Backwards the decay turns into growth, so the error of the forward leg is
  // amplified; the horizon is kept where that stays well below the bound.
  opts.t_end = 20.0;
  opts.local_tol = 1e-14;
  const State s0{0.0, 0.0, -0.5};
  const Trajectory fwd = integrate(kM3, s0, IntegratorKind::Gauss6, opts);
  REQUIRE(fwd.completed());
  opts.t_end = 0.0;
  const Trajectory back = integrate(kM3, fwd.states.back(), IntegratorKind::Gauss6, opts);
  REQUIRE(back.completed());
  const State& end = back.states.back();
  CHECK(std::abs(end.u - s0.u) <= 1e-6);
  CHECK(std::abs(end.v - s0.v) <= 1e-6);
}
