#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace finsler {

using cplx = std::complex<double>;

// Error kinds mirror the status codes exposed through the C API.
enum class ErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
    UnboundVariable,
    Order,
    Domain,
    Schema,
    Validation,
    SingularMatrix,
    Shape,
    Kind,
    DegenerateDelta,
    UnknownId,
    BadArgument,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct SyntaxError : Error {
    SyntaxError(std::string message, std::size_t offset, std::string expected)
        : Error(ErrorKind::Syntax,
                message + " at offset " + std::to_string(offset) +
                    (expected.empty() ? "" : " (expected " + expected + ")")),
          offset(offset),
          expected(std::move(expected)) {}

    std::size_t offset;
    std::string expected;
};

inline Error unknown_identifier(const std::string& name) {
    return Error(ErrorKind::UnknownIdentifier, "unknown identifier '" + name + "'");
}

inline Error arity_error(const std::string& fn, int expected, int got) {
    return Error(ErrorKind::Arity, "function '" + fn + "' expects " + std::to_string(expected) +
                                       " argument(s), got " + std::to_string(got));
}

inline Error domain_error(const std::string& what) { return Error(ErrorKind::Domain, what); }

inline Error order_error(int order, int cap) {
    return Error(ErrorKind::Order, "derivative order " + std::to_string(order) +
                                       " exceeds cap " + std::to_string(cap));
}

} // namespace finsler
