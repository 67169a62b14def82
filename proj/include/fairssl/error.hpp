#pragma once

#include <stdexcept>
#include <string>

namespace fairssl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Schema file or CSV header does not describe a usable dataset.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A raw value cannot be mapped to its column's code space.
class EncodingError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data violates an operation's precondition (empty group, too few rows, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Wraps an error raised inside a pipeline stage with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace fairssl
