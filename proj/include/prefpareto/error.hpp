#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prefpareto {

/// Failure categories shared by every module. The HTTP layer maps these onto
/// status classes (parameter/dimension/... → 400, not_found → 404, conflict → 409).
enum class ErrorCode {
    dimension,
    empty_input,
    reference_violation,
    parameter,
    capacity,
    lookup,
    numeric,
    precondition,
    conflict,
    not_found,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace prefpareto
