#pragma once

#include <stdexcept>
#include <string>

namespace omb {

// Configuration / domain errors: bad parameter values, invalid truncations,
// step-size violations. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures: solver non-convergence, unphysical density matrices.
// Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Correlation functions requested for a state with no photon occupancy.
struct UndefinedCorrelation : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace omb
