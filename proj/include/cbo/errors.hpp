#pragma once

#include <stdexcept>
#include <string>

namespace cbo {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A value (or index) fell outside its parameter's allowed range.
struct BoundsError : Error {
    using Error::Error;
};

// Rejection sampling exhausted its attempt budget without enough feasible draws.
struct FeasibilityError : Error {
    using Error::Error;
};

// Lookup of a parameter / surface by an unknown name.
struct NameError : Error {
    using Error::Error;
};

// An operation was applied to the wrong parameter kind (e.g. options() of a continuous dim).
struct KindError : Error {
    using Error::Error;
};

// Malformed objective specification (arity mismatch, threshold placement, ...).
struct SpecError : Error {
    using Error::Error;
};

// A proposal or vector does not match the space it is used with.
struct SpaceMismatchError : Error {
    using Error::Error;
};

// History-dependent query on an empty history.
struct EmptyHistoryError : Error {
    using Error::Error;
};

// Invalid run configuration; `path` holds a JSON-pointer-style location.
struct ConfigError : Error {
    std::string path;
    ConfigError(const std::string& json_pointer, const std::string& msg)
        : Error(json_pointer + ": " + msg), path(json_pointer) {}
};

} // namespace cbo
