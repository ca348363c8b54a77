#pragma once

#include <stdexcept>
#include <string>

namespace ckn {

// All failures surface as typed exceptions; the CLI maps them onto exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration or bad argument values (exit code 2 at the CLI).
struct ConfigError : Error {
    using Error::Error;
};

// Violated call contract: caller handed data the operation refuses to touch.
struct PreconditionError : Error {
    using Error::Error;
};

// Request escapes the stored data (time window, box core, schedule range).
struct RangeError : Error {
    using Error::Error;
};

// Malformed or truncated files (exit code 4 at the CLI).
struct IoError : Error {
    using Error::Error;
};

// Solver produced NaN/Inf; carries the last time the state was still finite.
struct BlowUpError : Error {
    double last_valid_time;
    BlowUpError(const std::string& what, double t)
        : Error(what), last_valid_time(t) {}
};

} // namespace ckn
