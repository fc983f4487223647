#pragma once

#include <stdexcept>
#include <string>

namespace wakefc {

// Base for every error raised by the library. Callers that only care about
// "did it work" catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// An iterative root-find or search failed to bracket or converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// A de-loading target cannot be met within the speed/pitch limits.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// The row-wake recursion produced a non-positive wind speed.
class DegenerateWakeError : public Error {
public:
    using Error::Error;
};

// Time-domain integration hit a non-finite value or a rotor limit.
class SimulationError : public Error {
public:
    using Error::Error;
};

// Configuration could not be read, parsed, or validated.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace wakefc
