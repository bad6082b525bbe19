#pragma once

#include <stdexcept>
#include <string>

namespace dguard {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside its admissible domain. `field()` names it.
class ParameterError : public Error {
public:
    ParameterError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A policy or bound was invoked outside its speed regime (v >= 1 vs v < 1).
class RegimeError : public Error {
public:
    using Error::Error;
};

// A caller broke a documented precondition (e.g. passed an escaped demand).
class ContractError : public Error {
public:
    using Error::Error;
};

// The graph handed to the longest-path solver contains a cycle.
class CycleError : public Error {
public:
    using Error::Error;
};

// Instance exceeds the exact solver's capacity.
class SizeError : public Error {
public:
    using Error::Error;
};

// Malformed experiment configuration or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dguard
