#include "datacat/error.hpp"

namespace datacat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::EncodingError: return "EncodingError";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::SelectorKindMismatch: return "SelectorKindMismatch";
        case ErrorCode::ResourceKindMismatch: return "ResourceKindMismatch";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::BoundsError: return "BoundsError";
        case ErrorCode::UnknownResource: return "UnknownResource";
        case ErrorCode::MalformedTriple: return "MalformedTriple";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnboundSelectedVariable: return "UnboundSelectedVariable";
        case ErrorCode::TemplateSyntaxError: return "TemplateSyntaxError";
        case ErrorCode::QueryError: return "QueryError";
        case ErrorCode::MissingParameter: return "MissingParameter";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace datacat
