#include "prony/error.hpp"

#include <algorithm>

namespace prony {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::NeedTwoPoints: return "NeedTwoPoints";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::EmptyKernel: return "EmptyKernel";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateDegree: return "DegenerateDegree";
    case ErrorCode::TooFewRoots: return "TooFewRoots";
    case ErrorCode::IllConditionedSystem: return "IllConditionedSystem";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view to_string(WarningCode code)
{
    switch (code) {
    case WarningCode::NoSpectralGap: return "NoSpectralGap";
    case WarningCode::SpuriousRoots: return "SpuriousRoots";
    case WarningCode::NonIsolatedRoots: return "NonIsolatedRoots";
    case WarningCode::DidNotConverge: return "DidNotConverge";
    case WarningCode::ZeroRank: return "ZeroRank";
    case WarningCode::OffTorusRoot: return "OffTorusRoot";
    }
    return "Unknown";
}

bool has_warning(const std::vector<Warning>& warnings, WarningCode code)
{
    return std::any_of(warnings.begin(), warnings.end(), [code](const Warning& w) { return w.code == code; });
}

} // namespace prony
