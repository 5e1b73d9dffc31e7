#pragma once

#include <stdexcept>
#include <string>

namespace hodgecover {

/// Malformed simplicial structure (missing face, bad ordering, index out of range).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not conform.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A quantity that is only defined for a nonzero signal or nonempty set.
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid parameters or data (bad rate, unknown method, corrupt file).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hodgecover
