#pragma once

#include <stdexcept>
#include <string>

namespace morsewell {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MORSEWELL_DEFINE_ERROR(Name)        \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    };

/// Argument outside the mathematical domain of a function.
MORSEWELL_DEFINE_ERROR(DomainError)
/// A series or iteration did not reach the requested accuracy.
MORSEWELL_DEFINE_ERROR(ConvergenceError)
/// Degenerate special-function path requested outside its validated range.
MORSEWELL_DEFINE_ERROR(NotImplementedFallback)
/// A configured safety bound was exceeded.
MORSEWELL_DEFINE_ERROR(GuardError)
/// Coefficient system for the regular solution cannot be solved reliably.
MORSEWELL_DEFINE_ERROR(SingularSystem)
/// Node counting found unresolved structure inside one grid cell.
MORSEWELL_DEFINE_ERROR(GridTooCoarse)
/// The requested bound state does not exist.
MORSEWELL_DEFINE_ERROR(NoSuchLevel)
/// The requested tolerance cannot be certified in double precision.
MORSEWELL_DEFINE_ERROR(PrecisionFloor)
/// Matching at a segment boundary is numerically singular.
MORSEWELL_DEFINE_ERROR(SingularTransfer)
/// Invalid input that violates a documented precondition.
MORSEWELL_DEFINE_ERROR(PreconditionError)

#undef MORSEWELL_DEFINE_ERROR

}  // namespace morsewell
