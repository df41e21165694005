// optimize.hpp — Multi-start minimization of smooth functionals over density
// matrices through the square-root parameterization ρ = LL†/tr(LL†).

#pragma once

#include <cstdint>
#include <functional>

#include "heatops/operators.hpp"

namespace heatops {

struct StateOptimum {
    double value;
    DensityMatrix argmin;
};

// `euclidean_gradient` returns the hermitian ∂f/∂ρ at ρ. Starts are a mix of
// Ginibre states of varying rank plus the maximally mixed state; each start is
// refined by L-BFGS with Armijo backtracking on the unconstrained L.
StateOptimum minimize_over_states(
    const std::function<double(const DensityMatrix&)>& objective,
    const std::function<Matrix(const DensityMatrix&)>& euclidean_gradient, int dim,
    int starts, std::uint64_t seed, int max_iterations = 300);

// ln ρ with eigenvalues floored away from zero, for gradient use.
Matrix log_floored(const Matrix& rho, double floor = 1e-18);

} // namespace heatops
