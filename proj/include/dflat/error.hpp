#pragma once

#include <stdexcept>
#include <string>

namespace dflat {

// Error taxonomy mapped to CLI exit codes: input/domain -> 2, the rest
// indicate internal numeric trouble and also exit 2 unless caught.
enum class ErrorKind {
    input,     // bad argument, unknown name, malformed flag
    domain,    // evaluation outside a function's real domain
    singular,  // division by zero value, singular matrix
    numeric,   // quadrature non-convergence and similar
    contract,  // precondition of a higher-level operation violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace dflat
