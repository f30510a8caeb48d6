#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chiron {

enum class ErrorCode {
    Syntax,
    UnknownReference,
    DuplicateNode,
    InvalidNetwork,
    Normalization,
    InvalidArgument,
    ImpossibleEvidence,
    UnknownVital,
    InvalidState,
    UnknownCasualty,
    UnknownModel,
    Io,
};

/// Stable upper-case identifier, e.g. "IMPOSSIBLE_EVIDENCE". Used on the wire.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace chiron
