// channels.hpp — Quantum operations in Kraus and Choi form: application,
// minimal representations, extremality tests and channel algebra.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "heatops/operators.hpp"

namespace heatops {

namespace tol {
inline constexpr double kraus_tp          = 1e-9;   // ‖Σ M†M - 1‖_max
inline constexpr double kraus_independent = 1e-9;   // relative smallest singular value
inline constexpr double choi_psd          = -1e-10;
inline constexpr double choi_tp           = 1e-9;
inline constexpr double choi_rank_cut     = 1e-10;  // relative to spectral norm
inline constexpr double extremal_sv       = 1e-9;   // relative smallest singular value
inline constexpr double weight_sum        = 1e-9;
} // namespace tol

// Trace-preserving completely positive map as a list of dim_out x dim_in Kraus
// operators. `minimal` certifies the operators are linearly independent.
class KrausChannel {
public:
    KrausChannel(std::vector<Matrix> kraus_ops, bool minimal = false);

    static KrausChannel identity(int dim);
    static KrausChannel unitary(const Matrix& u);
    // Constant-output channel ρ ↦ ρ0.
    static KrausChannel complete_erasure(const DensityMatrix& rho0, int dim_in = 0);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    int size() const { return static_cast<int>(ops_.size()); }
    bool minimal() const { return minimal_; }
    const std::vector<Matrix>& kraus() const { return ops_; }
    const Matrix& op(int i) const { return ops_.at(i); }

private:
    std::vector<Matrix> ops_;
    int dim_in_, dim_out_;
    bool minimal_;
};

// Unnormalized Choi matrix C = Σ_ij |i><j| ⊗ E(|i><j|), indexed input-major.
// PSD with tr_out C = 1_in.
class ChoiMatrix {
public:
    ChoiMatrix(Matrix m, int dim_in, int dim_out);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
    int dim_in_, dim_out_;
};

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);
Matrix apply_raw(const KrausChannel& channel, const Matrix& m);
// Heisenberg-picture adjoint, Σ M† X M.
Matrix apply_adjoint(const KrausChannel& channel, const Matrix& x);

ChoiMatrix to_choi(const KrausChannel& channel);
// Minimal Kraus set via Choi eigendecomposition; eigenvalues below
// tol::choi_rank_cut · ‖C‖ are discarded.
KrausChannel from_choi(const ChoiMatrix& choi);
int choi_rank(const ChoiMatrix& choi);
KrausChannel minimalize(const KrausChannel& channel);

struct ExtremalityReport {
    bool extremal;
    double smallest_sv;
    double largest_sv;
    // Coefficients c_ij with ‖Σ c_ij M_i†M_j‖ ≈ 0 when not extremal.
    std::optional<Matrix> witness;
};

// Linear independence of the n² products {M_i†M_j}; requires a minimal channel.
ExtremalityReport is_extremal(const KrausChannel& channel);

KrausChannel convex_combine(const std::vector<KrausChannel>& channels,
                            const std::vector<double>& weights);

// Max over a probe set (computational basis plus seeded Haar pure states) of
// the trace distance between channel outputs. An under-approximation of the
// worst-case distance, adequate for constant-output and near-identity pairs.
double channel_distance(const KrausChannel& a, const KrausChannel& b,
                        int probes = 64, std::uint64_t seed = 7);

} // namespace heatops
