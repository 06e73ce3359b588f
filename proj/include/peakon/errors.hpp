#pragma once

#include <stdexcept>
#include <string>

namespace peakon {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid numeric parameters (grid sizes, time steps, tolerances).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Caller broke an operation contract, e.g. mixing grids.
class ContractError : public Error {
public:
    using Error::Error;
};

// Parameters outside the regime where a closed form is valid.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class UnsupportedCaseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace peakon
