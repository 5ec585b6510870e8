#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace vplk {

// Violated input contract (bad sizes, non-positive densities, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// E(t) <= 0 in the massless model.
class EnergyPositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal identity that must hold for valid states did not.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class BlowupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Returns the previous handler. The default prints to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace vplk
