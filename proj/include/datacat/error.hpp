#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace datacat {

/// Machine-readable failure categories shared by every module. Each maps to
/// exactly one code string and one HTTP status at the service boundary.
enum class ErrorCode {
    FileNotFound,
    EncodingError,
    EmptyFile,
    OutOfBounds,
    SelectorKindMismatch,
    ResourceKindMismatch,
    SyntaxError,
    BoundsError,
    UnknownResource,
    MalformedTriple,
    ParseError,
    UnboundSelectedVariable,
    TemplateSyntaxError,
    QueryError,
    MissingParameter,
    IoError,
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

/// Error raised while reading line-oriented input; carries the 1-based line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace datacat
