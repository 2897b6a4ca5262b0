#ifndef PRONY_ERROR_HPP
#define PRONY_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prony {

/// Fatal failure categories. Every exception thrown by the library is a
/// prony::Error carrying one of these.
enum class ErrorCode {
    InvalidArgument,
    GenerationFailed,
    NeedTwoPoints,
    IncompleteGrid,
    EmptyKernel,
    InvalidCoefficients,
    RankDeficient,
    DegenerateDegree,
    TooFewRoots,
    IllConditionedSystem,
    ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

/// Non-fatal conditions, collected into results instead of thrown.
enum class WarningCode {
    NoSpectralGap,
    SpuriousRoots,
    NonIsolatedRoots,
    DidNotConverge,
    ZeroRank,
    OffTorusRoot,
};

std::string_view to_string(WarningCode code);

struct Warning {
    WarningCode code;
    std::string message;
};

bool has_warning(const std::vector<Warning>& warnings, WarningCode code);

} // namespace prony

#endif
