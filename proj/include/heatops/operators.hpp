// operators.hpp — Dense operator core: hermitian operators, density matrices,
// isometries, tensor/partial-trace algebra, entropies and the J-function.

#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heatops/errors.hpp"

namespace heatops {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Construction / validation tolerances.
inline constexpr double hermiticity      = 1e-10;
inline constexpr double state_trace      = 1e-10;
inline constexpr double state_min_eig    = -1e-10;
inline constexpr double isometry_defect  = 1e-9;
inline constexpr double spectral_recon   = 1e-9;
// Numerical floors.
inline constexpr double entropy_floor    = 1e-14;  // eigenvalues below this contribute 0·ln 0 = 0
inline constexpr double support_overlap  = 1e-12;  // kernel weight above this => S(σ‖ρ) = +inf
// Dense size cap: entries per matrix.
inline constexpr long   max_matrix_entries = 1L << 22;
} // namespace tol

enum class Units { energy, dimensionless };

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Hermitian matrix with a units tag. Inputs within tolerance of hermitian are
// symmetrized on store; anything worse is rejected.
class HermitianOperator {
public:
    HermitianOperator(Matrix entries, Units units);

    static HermitianOperator identity(int dim, Units units);
    static HermitianOperator zero(int dim, Units units);
    static HermitianOperator diagonal(const RealVector& diag, Units units);

    int dim() const { return static_cast<int>(entries_.rows()); }
    Units units() const { return units_; }
    const Matrix& matrix() const { return entries_; }

    HermitianOperator scaled(double factor) const { return {entries_ * factor, units_}; }
    HermitianOperator shifted(double constant) const {
        return {entries_ + constant * Matrix::Identity(dim(), dim()), units_};
    }

private:
    Matrix entries_;
    Units units_;
};

// Positive semidefinite, unit-trace state.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix maximally_mixed(int dim);
    static DensityMatrix pure(const Vector& psi);      // normalizes psi
    static DensityMatrix basis_state(int dim, int i);  // |i><i|
    static DensityMatrix diagonal(const RealVector& probs);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }

private:
    Matrix entries_;
};

// Linear map V between Hilbert spaces with V†V = 1 on the input space.
class Isometry {
public:
    explicit Isometry(Matrix entries);

    int dim_in() const { return static_cast<int>(entries_.cols()); }
    int dim_out() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }

private:
    Matrix entries_;
};

struct SpectralDecomposition {
    RealVector eigenvalues;  // nondecreasing
    Matrix eigenvectors;     // columns, unitary
};

// Eigendecomposition of a hermitian matrix, ascending, with a reconstruction
// check against tol::spectral_recon.
SpectralDecomposition spectral(const Matrix& m);
inline SpectralDecomposition spectral(const HermitianOperator& m) { return spectral(m.matrix()); }

// ---------------------------------------------------------------------------
// Tensor algebra
// ---------------------------------------------------------------------------

// Kronecker product on raw matrices. Subsystem ordering is left-to-right:
// index (i_a, i_b) flattens to i_a * dim_b + i_b.
Matrix kron(const Matrix& a, const Matrix& b);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Reduction of a multipartite operator onto the kept subsystems. `dims` are the
// subsystem dimensions left-to-right; their product must equal m's dimension.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep);

// Bipartite shorthands.
Matrix partial_trace_second(const Matrix& m, int dim_a, int dim_b);  // keeps A
Matrix partial_trace_first(const Matrix& m, int dim_a, int dim_b);   // keeps B

// ---------------------------------------------------------------------------
// Entropies and thermal states (k_B = 1, entropies in nats)
// ---------------------------------------------------------------------------

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const RealVector& probs);

// S(σ‖ρ); +infinity when σ has support outside ρ's beyond tol::support_overlap.
double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho);
double relative_entropy(const RealVector& sigma_probs, const RealVector& rho_probs);

// Legendre transform of the entropy, J(G) = -ln tr e^{-G}; G is dimensionless
// (pass βQ, not Q). Evaluated spectrally with log-sum-exp stabilization.
double j_function(const HermitianOperator& g);
double j_function(const Matrix& g);
double j_function(const RealVector& eigenvalues);

struct GibbsState {
    DensityMatrix state;
    double log_partition;  // ln Z
};

// Canonical state e^{-βH}/Z of an energy-units Hamiltonian; full rank.
GibbsState gibbs_state(const HermitianOperator& h, double beta);

// σ_G = e^{J(G)} e^{-G}: the state achieving J(G) = tr σ_G G - S(σ_G).
DensityMatrix minimizer_sigma(const HermitianOperator& g);
DensityMatrix minimizer_sigma(const Matrix& g);

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_norm(const Matrix& m);

} // namespace heatops
