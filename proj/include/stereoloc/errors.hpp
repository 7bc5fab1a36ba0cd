#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stereoloc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// geometry

class NonFinite : public Error {
public:
    using Error::Error;
};

class BehindCamera : public Error {
public:
    using Error::Error;
};

class NonPositiveDisparity : public Error {
public:
    using Error::Error;
};

class NonPositiveDepth : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant (rig, intrinsics, config section).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// label files

class LabelParseError : public Error {
public:
    enum class Kind { MalformedLine, OutOfRange };

    LabelParseError(Kind kind, std::size_t line_no, const std::string& what)
        : Error(what), kind_(kind), line_no_(line_no) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line_no() const noexcept { return line_no_; }

private:
    Kind kind_;
    std::size_t line_no_;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class InfeasibleConfig : public Error {
public:
    using Error::Error;
};

/// Malformed frame passed to the pipeline (side or frame_id mismatch).
class InvalidFrame : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A CSV or JSON document lacks a required column or field.
class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class FixtureMalformed : public Error {
public:
    using Error::Error;
};

/// Config validation failure; `path()` is the dotted field path.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace stereoloc
