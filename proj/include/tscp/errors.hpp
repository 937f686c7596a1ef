#pragma once

#include <stdexcept>
#include <string>

namespace tscp {

enum class ErrorCode {
    LengthMismatch,
    PeriodTooLarge,
    EmptySeries,
    TooFewPoints,
    WindowTooLarge,
    SeriesTooShort,
    SingularDesign,
    DimensionMismatch,
    CoverageFailure,
    TooFewRows,
    AllZeroWeights,
    NeighborhoodTooLarge,
    MissingColumn,
    NonNumericCell,
    EmptyFile,
    IoFailure,
    ConfigError,
    BadArgument,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace tscp
