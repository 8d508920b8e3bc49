#pragma once

#include <stdexcept>
#include <string>

namespace minsurf {

/// Domain error: invalid data, violated precondition, failed validation.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Text or JSON input that cannot be decoded. `line` is 1-based, 0 if unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line_number = 0)
        : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + msg : msg),
          line(line_number) {}
    int line;
};

/// Filesystem failure; carries the offending path.
class IoError : public Error {
public:
    IoError(const std::string& msg, std::string file_path)
        : Error(msg + ": " + file_path), path(std::move(file_path)) {}
    std::string path;
};

}  // namespace minsurf
