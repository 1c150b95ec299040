#include "pathforge/error.hpp"

namespace pathforge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateFrame: return "DegenerateFrame";
        case ErrorCode::InvalidStep: return "InvalidStep";
        case ErrorCode::DegenerateSegment: return "DegenerateSegment";
        case ErrorCode::CollinearPoints: return "CollinearPoints";
        case ErrorCode::DegenerateNormals: return "DegenerateNormals";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NoActivation: return "NoActivation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace pathforge
