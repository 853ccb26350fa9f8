#pragma once

#include <stdexcept>
#include <string>

namespace trirank {

/// Bad input: malformed arguments, violated preconditions, non-prime p.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A series or product evaluation produced an inconsistent value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An instance exceeds a configured size or work budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

} // namespace trirank
