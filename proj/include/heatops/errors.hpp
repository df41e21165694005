// errors.hpp — Exception types shared across the toolkit

#pragma once

#include <stdexcept>
#include <string>

namespace heatops {

// Malformed shapes/arguments (dimension mismatch, bad weights, ...).
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A type invariant failed (non-hermitian input, trace off, isometry defect, ...).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal numerical inconsistency (two routes to the same quantity disagree,
// root finding failed to converge, ...).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested operator is not a possible HTO for the requested operation.
struct inadmissible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite chain cannot meet the requested truncation quality; retry with a
// longer chain.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix size beyond the configured dense cap.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace heatops
