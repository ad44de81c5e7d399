/**
 * @file errors.hpp
 * @brief Exception types shared by all modules
 *
 * The CLI maps each type to a process exit code.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace clab {

/// Argument outside the declared domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters fall in a different regime than the one requested.
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A construction whose inequalities cannot be met.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root finder, quadrature, integrator or iteration failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 2;
inline constexpr int infeasible = 3;
inline constexpr int nonconvergence = 4;
}  // namespace exit_code

}  // namespace clab
