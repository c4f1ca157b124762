#pragma once

// Error types thrown by the library. Everything derives from wallfit::error
// so callers can catch the whole family at a pipeline boundary while tests
// can still distinguish individual failure modes.

#include <stdexcept>
#include <string>

namespace wallfit {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric precondition was violated (non-positive y+, ln Re, ...).
class domain_error : public error {
public:
    using error::error;
};

// An operation had fewer samples than it needs.
class insufficient_data : public error {
public:
    using error::error;
};

// A fit exists arithmetically but violates the model's constraints
// (zero abscissa variance, exponent outside (0, 1), non-positive slope).
class degenerate_fit : public error {
public:
    using error::error;
};

// Region-I prefactor <= 5/2, so ln Re1 would be non-positive.
class nonphysical_prefactor : public error {
public:
    using error::error;
};

// The profile lacks optional metadata (u_inf, u_tau, nu) the operation needs.
class metadata_missing : public error {
public:
    using error::error;
};

// A constructed value violates a type invariant.
class validation_error : public error {
public:
    using error::error;
};

// Malformed input text; carries the 1-based line number.
class parse_error : public error {
public:
    parse_error(int line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Filesystem-level failure (unreadable directory, unwritable destination).
class io_error : public error {
public:
    using error::error;
};

}  // namespace wallfit
