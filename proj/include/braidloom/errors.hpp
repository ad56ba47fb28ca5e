#pragma once

#include <stdexcept>
#include <string>

namespace braidloom {

enum class ErrorCode {
    SiteMismatch,
    IllegalDeath,
    IndexOutOfRange,
    IllegalDestabilize,
    InvalidMovie,
    TooLarge,
    NonEmbeddedBand,
    ObstructedRouting,
    NotThreaded,
    IncompatibleOverpasses,
    NotBadPattern,
    BadR3Unresolved,
    InconsistentDisk,
    BoundaryMismatch,
    NonEmptyStart,
    NotNormalized,
    SyntaxError,
    InvariantViolation,
    UnsupportedFormat,
    Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace braidloom
