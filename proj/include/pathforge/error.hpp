#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathforge {

enum class ErrorCode {
    DegenerateFrame,
    InvalidStep,
    DegenerateSegment,
    CollinearPoints,
    DegenerateNormals,
    OutOfRange,
    NoActivation,
    InvalidArgument,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this exception; the code lets callers
// (and the CLI exit path) branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pathforge
