#include "legsynth/errors.hpp"

namespace legsynth {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NoAssembly:
        return "NoAssembly";
    case ErrorCode::Singular:
        return "Singular";
    case ErrorCode::OutOfRange:
        return "OutOfRange";
    case ErrorCode::InvalidGeometry:
        return "InvalidGeometry";
    case ErrorCode::Unreachable:
        return "Unreachable";
    case ErrorCode::NoFeasible:
        return "NoFeasible";
    case ErrorCode::BudgetExceeded:
        return "BudgetExceeded";
    case ErrorCode::Degenerate:
        return "Degenerate";
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace legsynth
