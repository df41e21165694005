// random.hpp — Seeded generators for states, unitaries and hermitian operators.

#pragma once

#include <cstdint>
#include <random>

#include "heatops/operators.hpp"

namespace heatops {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double normal() { return normal_(eng_); }
    double uniform() { return uniform_(eng_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(eng_);
    }
    std::uint64_t raw() { return eng_(); }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Matrix of iid standard complex gaussians.
Matrix ginibre(Rng& rng, int rows, int cols);

Vector random_pure(Rng& rng, int dim);

// Full-rank by construction for rank == dim (almost surely).
DensityMatrix random_density(Rng& rng, int dim, int rank = 0);  // rank 0 => full

Matrix random_unitary(Rng& rng, int dim);
Isometry random_isometry(Rng& rng, int dim_in, int dim_out);

HermitianOperator random_hermitian(Rng& rng, int dim, Units units, double scale = 1.0);

} // namespace heatops
