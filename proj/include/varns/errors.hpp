#pragma once

#include <stdexcept>
#include <string>

namespace varns {

/// Invalid argument shapes, axis indices, grid kinds and similar misuse.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition (admissibility, boundary traces).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Factorization or solve failed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace varns
