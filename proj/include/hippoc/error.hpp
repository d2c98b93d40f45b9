#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hippoc {

enum class ErrorCode {
    InvalidArgument,
    NonDyadicDenominator,
    OutOfRange,
    InsufficientPrecision,
    ParseError,
    TruncatedHeader,
    UnknownSource,
    PrefixTooShort,
    InvalidInterval,
    DivisionByZero,
    TooLarge,
    DegenerateP,
    ZeroTrials,
    NoPassingLevel,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when a prefix is shorter than the largest checkpoint an operation needs.
class PrefixTooShort : public Error {
public:
    PrefixTooShort(std::uint64_t required, std::uint64_t available)
        : Error(ErrorCode::PrefixTooShort,
                "need " + std::to_string(required) + " bits, have " + std::to_string(available)),
          required_(required) {}

    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

class ParseError : public Error {
public:
    ParseError(std::uint64_t offset, const std::string& what)
        : Error(ErrorCode::ParseError, what + " at byte offset " + std::to_string(offset)),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace hippoc
