#pragma once

#include <stdexcept>
#include <string>

namespace ris {

// Input outside the mathematical domain of an operation (e.g. an AOA behind the surface).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Vector or matrix sizes that do not line up.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// B D_h a(phi) vanished, so the ML utility is undefined at that angle.
class DegenerateDirectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Some BS-RIS coefficient is zero and D_h cannot be inverted.
class SingularChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExhaustedPoolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientPilotsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration value violates an invariant; the message names the field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ris
