#pragma once

#include <stdexcept>
#include <string>

namespace hypokol {

enum class Errc {
    OrderExceeded,
    NonPositiveTime,
    InvalidSpec,
    StepTooLarge,
    GridMismatch,
    NonConvergence,
    OutOfDomain,
    MarginViolation,
    NonPositiveCoordinate,
    RuleUndersized,
    Parse,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline void require_positive_time(double t, const char* where) {
    if (!(t > 0.0)) throw Error(Errc::NonPositiveTime, where);
}

} // namespace hypokol
