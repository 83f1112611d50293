#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

/// Base class for every diagnosable failure of the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HALFLINE_DEFINE_ERROR(NAME)          \
  struct NAME : Error {                      \
    using Error::Error;                      \
  }

HALFLINE_DEFINE_ERROR(ShapeMismatch);
HALFLINE_DEFINE_ERROR(NotSelfAdjointBC);
HALFLINE_DEFINE_ERROR(DegenerateBC);
HALFLINE_DEFINE_ERROR(SingularTransform);

HALFLINE_DEFINE_ERROR(DerivativeUnavailable);
HALFLINE_DEFINE_ERROR(NotFaddeev);

HALFLINE_DEFINE_ERROR(TailTooShort);
HALFLINE_DEFINE_ERROR(ZeroWavenumberOnAxis);
HALFLINE_DEFINE_ERROR(IntegratorFailure);

HALFLINE_DEFINE_ERROR(SmoothnessRequired);
HALFLINE_DEFINE_ERROR(QuadratureFailure);
HALFLINE_DEFINE_ERROR(TruncationTooShort);
HALFLINE_DEFINE_ERROR(LeadingCoefficientZero);

HALFLINE_DEFINE_ERROR(ScanResolutionTooCoarse);
HALFLINE_DEFINE_ERROR(MultiplicityMismatch);
HALFLINE_DEFINE_ERROR(InconsistentMu);
HALFLINE_DEFINE_ERROR(MeshTooCoarse);

HALFLINE_DEFINE_ERROR(BranchAmbiguity);
HALFLINE_DEFINE_ERROR(InsufficientEOrder);
HALFLINE_DEFINE_ERROR(QuadratureBudgetExceeded);

HALFLINE_DEFINE_ERROR(ConfigError);

#undef HALFLINE_DEFINE_ERROR

}  // namespace halfline
