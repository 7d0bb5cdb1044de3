#pragma once

#include <stdexcept>
#include <string>

namespace evlab {

// Base class for every error raised by the toolkit. Subclasses exist so
// callers (and tests) can catch specific failure modes by type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define EVLAB_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                 \
        explicit Name(const std::string& what) : Error(what) {}           \
    }

EVLAB_DEFINE_ERROR(NonPrimeError);
EVLAB_DEFINE_ERROR(OverflowError);
EVLAB_DEFINE_ERROR(FieldMismatchError);
EVLAB_DEFINE_ERROR(DivisionByZeroError);
EVLAB_DEFINE_ERROR(NotDivisorError);
EVLAB_DEFINE_ERROR(OddDError);
EVLAB_DEFINE_ERROR(DomainTooLargeError);
EVLAB_DEFINE_ERROR(TooLargeError);
EVLAB_DEFINE_ERROR(EmptyComplexError);
EVLAB_DEFINE_ERROR(TooManyOrbitsError);
EVLAB_DEFINE_ERROR(NotAnActionError);
EVLAB_DEFINE_ERROR(BadPartitionError);
EVLAB_DEFINE_ERROR(BadShapeError);
EVLAB_DEFINE_ERROR(NotCoprimeError);
EVLAB_DEFINE_ERROR(CapExceededError);
EVLAB_DEFINE_ERROR(OrderTooLargeError);
EVLAB_DEFINE_ERROR(NoPartitionError);
EVLAB_DEFINE_ERROR(NoValidTError);
EVLAB_DEFINE_ERROR(FormatError);

#undef EVLAB_DEFINE_ERROR

// A prime window scan came up empty.  Carries the searched interval; the
// occurrence itself is data worth reporting, not just a failure.
struct NoPrimeInWindowError : Error {
    unsigned long long lo, hi, modulus, residue;
    NoPrimeInWindowError(const std::string& what, unsigned long long lo_,
                         unsigned long long hi_, unsigned long long mod_,
                         unsigned long long res_)
        : Error(what), lo(lo_), hi(hi_), modulus(mod_), residue(res_) {}
};

}  // namespace evlab
