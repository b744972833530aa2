#pragma once

#include <stdexcept>
#include <string>

namespace ksforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define KSFORGE_ERROR(NAME)                       \
    struct NAME : Error {                         \
        using Error::Error;                       \
    }

KSFORGE_ERROR(ZeroVector);
KSFORGE_ERROR(DimMismatch);
KSFORGE_ERROR(ParallelInput);
KSFORGE_ERROR(NotOrthogonal);
KSFORGE_ERROR(DuplicateEdge);
KSFORGE_ERROR(UnknownVertex);
KSFORGE_ERROR(SizeLimit);
KSFORGE_ERROR(AlphabetError);
KSFORGE_ERROR(PartialAssignment);
KSFORGE_ERROR(ValueOutsideAlphabet);
KSFORGE_ERROR(TooLarge);
KSFORGE_ERROR(InfeasibleSystem);
KSFORGE_ERROR(NoRootInBracket);
KSFORGE_ERROR(ResidualTooLarge);
KSFORGE_ERROR(CertificationFailed);
KSFORGE_ERROR(SynthesisFailed);
KSFORGE_ERROR(GadgetUnavailable);
KSFORGE_ERROR(NotCompleted);
KSFORGE_ERROR(PredicateLeak);
KSFORGE_ERROR(TooLargeForBruteForce);
KSFORGE_ERROR(MalformedBehavior);
KSFORGE_ERROR(UnknownEntry);
KSFORGE_ERROR(ExpectationMismatch);
KSFORGE_ERROR(StageFailed);
KSFORGE_ERROR(UsageError);

#undef KSFORGE_ERROR

}  // namespace ksforge
