#pragma once

#include <stdexcept>
#include <string>

namespace rf {

// Every library failure derives from Error so the CLI can map it to an exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller passed something outside the documented domain.
struct ValidationError : Error { using Error::Error; };

struct PoleError : Error { using Error::Error; };
struct IncompatibleClassError : Error { using Error::Error; };
struct IndexTooLarge : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct TableIncomplete : Error { using Error::Error; };
struct NoRecurrenceFound : Error { using Error::Error; };

// A claimed identity or inequality failed; these map to exit code 2.
struct VerificationError : Error { using Error::Error; };
struct CertificateInvalid : VerificationError { using VerificationError::VerificationError; };
struct RecurrenceViolated : VerificationError { using VerificationError::VerificationError; };
struct MonotonicityViolated : VerificationError { using VerificationError::VerificationError; };
struct CoercivityViolated : VerificationError { using VerificationError::VerificationError; };

}  // namespace rf
