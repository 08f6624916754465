#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a mathematical operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed expression text. `offset()` is the byte position of the problem.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected)
        : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
          offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifierError : public Error {
public:
    UnknownIdentifierError(std::size_t offset, std::string name)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          offset_(offset), name_(std::move(name)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

/// A function could not be evaluated at a point (domain violation, overflow,
/// or a non-positive value where a positive one is required).
class EvaluationError : public Error {
public:
    enum class Kind { Domain, Overflow, NotPositive };

    EvaluationError(Kind kind, std::string what) : Error(std::move(what)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Bad command-line or configuration input.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace hhlab
