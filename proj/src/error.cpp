#include "chiron/error.hpp"

namespace chiron {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Syntax: return "SYNTAX";
        case ErrorCode::UnknownReference: return "UNKNOWN_REFERENCE";
        case ErrorCode::DuplicateNode: return "DUPLICATE_NODE";
        case ErrorCode::InvalidNetwork: return "INVALID_NETWORK";
        case ErrorCode::Normalization: return "NORMALIZATION";
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::ImpossibleEvidence: return "IMPOSSIBLE_EVIDENCE";
        case ErrorCode::UnknownVital: return "UNKNOWN_VITAL";
        case ErrorCode::InvalidState: return "INVALID_STATE";
        case ErrorCode::UnknownCasualty: return "UNKNOWN_CASUALTY";
        case ErrorCode::UnknownModel: return "UNKNOWN_MODEL";
        case ErrorCode::Io: return "IO";
    }
    return "UNKNOWN";
}

}  // namespace chiron
