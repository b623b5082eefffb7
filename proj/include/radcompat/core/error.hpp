#pragma once

#include <stdexcept>
#include <string>

namespace radcompat {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad grid, manifest, or command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid data (dims mismatch, duplicate ids, bad phantom spec).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A texture matrix could not be built (no voxel pairs, no neighbors).
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Unsupported or malformed file content.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Payload size disagrees with the header.
class TruncationError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Filesystem failure, always carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace radcompat
