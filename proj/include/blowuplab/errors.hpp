#pragma once

#include <stdexcept>
#include <string>

namespace blowuplab {

// Base for every error raised by the library. Termination of a trajectory
// (blow-up, step underflow) is data, not an error; see Trajectory.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BLOWUPLAB_DEFINE_ERROR(Name)      \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

BLOWUPLAB_DEFINE_ERROR(DomainError);
BLOWUPLAB_DEFINE_ERROR(NonFinite);
BLOWUPLAB_DEFINE_ERROR(StageSolveFailure);
BLOWUPLAB_DEFINE_ERROR(FitFailure);
BLOWUPLAB_DEFINE_ERROR(BranchMismatch);
BLOWUPLAB_DEFINE_ERROR(InsufficientData);
BLOWUPLAB_DEFINE_ERROR(NotACharacteristicRoot);
BLOWUPLAB_DEFINE_ERROR(BlownUpTrajectory);
BLOWUPLAB_DEFINE_ERROR(NonUniformGrid);
BLOWUPLAB_DEFINE_ERROR(InsufficientSamples);
BLOWUPLAB_DEFINE_ERROR(Inconclusive);

#undef BLOWUPLAB_DEFINE_ERROR

}  // namespace blowuplab
