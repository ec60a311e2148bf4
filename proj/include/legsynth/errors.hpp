#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace legsynth {

enum class ErrorCode {
    NoAssembly,      // a required circle intersection does not exist
    Singular,        // configuration at a serial or parallel singularity
    OutOfRange,      // output coordinate outside the reachable interval
    InvalidGeometry, // inconsistent environment or link parameters
    Unreachable,     // stroke cannot cover the pipe radius range
    NoFeasible,      // optimizer archive ended up empty
    BudgetExceeded,  // grid oracle larger than its configured budget
    Degenerate,      // not enough distinct points for a fit
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace legsynth
