#pragma once
// Error taxonomy for the library: every throwing path uses one of these so
// callers (CLI, python bindings, tests) can distinguish bad input from a
// genuine numerical breakdown.

#include <stdexcept>
#include <string>

namespace cmclab {

// Caller passed arguments outside a routine's documented domain
// (non-spacelike configuration, r <= 2m, negative mass, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its accuracy contract
// (quadrature/Newton non-convergence, diverging extrapolation, ...).
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration or snapshot file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cmclab
