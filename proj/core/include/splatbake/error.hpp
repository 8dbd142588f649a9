#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splatbake {

enum class ErrorKind {
    // geometry
    MissingUV,
    MissingNormal,
    MalformedRecord,
    EmptyMesh,
    DegenerateNormal,
    // splat
    EmptyCloud,
    BadHeader,
    MissingProperty,
    TruncatedBody,
    InvalidValue,
    // raster / project / metrics
    NoCoverage,
    GridCloudMismatch,
    DimensionMismatch,
    // i/o
    IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, size_t line = 0)
        : std::runtime_error(format(kind, message, line)), kind_(kind), line_(line) {}

    ErrorKind kind() const { return kind_; }
    /// 1-based input line for parse errors, 0 when not applicable.
    size_t line() const { return line_; }

private:
    static std::string format(ErrorKind kind, const std::string& message, size_t line);

    ErrorKind kind_;
    size_t line_;
};

} // namespace splatbake
