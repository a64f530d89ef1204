#pragma once

#include <optional>
#include <string>

#include "blowuplab/integrate.hpp"
#include "blowuplab/model.hpp"

namespace blowuplab {

enum class VerdictKind {
  Trivial,
  Stationary,
  GlobalBounded,
  BlowUpForward,
  BlowUpBackward,
  NoGlobalSolution,
  Unclassified,
};

std::string to_string(VerdictKind kind);

// Which half-lines a GlobalBounded verdict speaks about.
enum class Scope { Both, Forward, Backward };

std::string to_string(Scope scope);

struct VerdictDetail {
  // B = 0 bounded branch: u = -b tanh(A b t / 2 + c).
  std::optional<double> tanh_b;
  std::optional<double> tanh_c;
  // Upper bound on |T| for the blow-up time in the verdict's direction.
  std::optional<double> blowup_bound;
  bool bound_is_exact = false;
  std::optional<double> e0;
  std::string branch;  // closed-form family name when one applies
  bool decays = false;  // u -> 0 in every claimed direction
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unclassified;
  std::string basis;
  VerdictDetail detail;
  Scope scope = Scope::Both;
};

/// Qualitative fate of the solution through (u0, v0). Never throws.
Verdict classify(const OdeParams& p, double u0, double v0);

enum class VerifyStatus { Pass, Fail, Inconclusive, NotApplicable };

std::string to_string(VerifyStatus status);

struct VerifyReport {
  VerifyStatus status = VerifyStatus::NotApplicable;
  std::string forward_termination;
  std::string backward_termination;
  std::optional<double> t_blowup_estimate;
  double sup_abs_u = 0.0;
  double u_forward_end = 0.0;
  double u_backward_end = 0.0;
  double endpoint_error = 0.0;  // against the tanh branch, when carried
  std::string message;
};

/// Integrates to +-horizon and checks the verdict's claims. Step underflow or
/// the step budget without a threshold crossing yields Inconclusive.
/// Throws DomainError unless horizon > 0.
VerifyReport verify_verdict(const OdeParams& p, double u0, double v0, const Verdict& verdict,
                            double horizon);

/// Horizon used for a verdict in grid sweeps: 50 for blow-up claims, 200 otherwise.
double default_horizon(const Verdict& verdict);

struct PeriodReport {
  bool periodic = false;
  std::optional<double> period;
  double closure_error = 0.0;
};

/// Looks for a return of the orbit through s0 to itself within (s0.t, s0.t + t_max]
/// using a section through s0, refined by bisection on the crossing step.
/// Throws Inconclusive when the run blows up or stops early.
PeriodReport detect_period(const OdeParams& p, const State& s0, double t_max,
                           double tol = 1e-5);

}  // namespace blowuplab
