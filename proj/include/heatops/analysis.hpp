// analysis.hpp — Admissibility decisions for heat transfer operators: the
// entropic erasure bound, complete-erasure characterization, heat-transfer-
// matrix extraction for extremal operations, matrix widening, the
// strong-subadditivity corollary, and the near-identity family study.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heatops/channels.hpp"
#include "heatops/realizations.hpp"

namespace heatops {

namespace tol {
inline constexpr double lep_slack          = -1e-8;   // min slack below this => inadmissible
inline constexpr double boundary_window    = 1e-10;   // |J + S(ρ0)| for the equality case
inline constexpr double isospectral_match  = 1e-8;    // sorted spectra in the equality case
inline constexpr double heat_matrix_fit    = 1e-9;    // residual relative to ‖Q‖
inline constexpr double widen_positive     = 1e-10;   // min eigenvalue of the widening step
} // namespace tol

enum class Verdict { admissible, inadmissible, boundary };

struct AdmissibilityVerdict {
    Verdict verdict;
    double j_value;                        // J(βQ) resp. J(βq)
    double margin;                         // distance to the deciding threshold
    std::string detail;
    std::optional<double> isospectral_gap; // boundary case: max sorted-spectrum gap
};

// ---------------------------------------------------------------------------
// Entropic bound (generalized erasure principle)
// ---------------------------------------------------------------------------

struct LepReport {
    double min_slack;          // min over ρ of tr ρQ - (1/β)[S(ρ) - S(E(ρ))]
    DensityMatrix worst_state;
    bool admissible;           // min_slack >= tol::lep_slack
};

// Minimizes the slack over random states refined by multi-start optimization.
LepReport check_lep(const KrausChannel& channel, const HermitianOperator& q, double beta,
                    int samples = 200, std::uint64_t seed = 23, int starts = 32);

// Max entropy drop max_ρ [S(ρ) - S(E(ρ))] by the same machinery.
double max_entropy_drop(const KrausChannel& channel, int starts = 32,
                        std::uint64_t seed = 29);

// ---------------------------------------------------------------------------
// Complete erasures (J vs -S(ρ0), with the isospectral boundary case)
// ---------------------------------------------------------------------------

AdmissibilityVerdict decide_complete_erasure_hto(const HermitianOperator& q, double beta,
                                                 const DensityMatrix& rho0);

// ---------------------------------------------------------------------------
// Heat transfer matrices (extremal operations)
// ---------------------------------------------------------------------------

struct HeatTransferMatrix {
    Matrix q;         // n×n hermitian, energy units
    double residual;  // ‖Σ q_ij M_i†M_j - Q‖_F
    bool unique;      // false when {M_i†M_j} is linearly dependent (min-norm solution)
};

// Least-squares solve of Q = Σ q_ij M_i†M_j over a minimal Kraus set. With
// `require_fit`, a residual beyond tol::heat_matrix_fit·‖Q‖ raises
// inadmissible_error (the operator provably lacks the required structure).
HeatTransferMatrix extract_heat_matrix(const HermitianOperator& q_op,
                                       const KrausChannel& channel,
                                       bool require_fit = false);

// Theorem decision for extremal operations: n = 1 needs Q = α·1 with α ≥ 0;
// n ≥ 2 needs the unique q to satisfy tr e^{-βq} < 1 strictly. Non-extremal
// channels are rejected (only sufficiency would be available).
AdmissibilityVerdict decide_extremal_hto(const HermitianOperator& q_op,
                                         const KrausChannel& channel, double beta);

// Lift U = Σ M_i ⊗ L_i over a truncated-shift Landauer erasure of q on the
// hypothetical n-level system; the realization's HTO is Σ q_ij M_i†M_j.
DenseRealization realize_from_heat_matrix(const KrausChannel& channel, const Matrix& q,
                                          double beta, int sites = 3);

struct WidenCertificate {
    Matrix q_prime;          // q + s
    Matrix component;        // q + t·s, passes the strict trace test
    double t;                // convex weights (1/t, (t-1)/t)
    double component_trace;  // tr e^{-β(q+ts)}
};

// q + s is admissible for any strictly positive s: find t ≥ 1 with
// tr e^{-β(q+ts)} < 1 and certify by convexity. The certificate, not a direct
// trace test, is what validates q + s.
WidenCertificate widen_heat_matrix(const Matrix& q, const Matrix& s, double beta);

// ---------------------------------------------------------------------------
// Strong subadditivity corollary
// ---------------------------------------------------------------------------

// min over sampled joints of [S(ρ_A)-S(ρ'_A)] - [S(ρ_AX)-S(ρ'_AX)] with the
// channel acting on A only; nonnegative up to numerics.
double strong_subadditivity_margin(const KrausChannel& channel, int ancilla_dim,
                                   int samples, std::uint64_t seed = 31);

// ---------------------------------------------------------------------------
// Near-identity family E_t: M_1 = tX, M_2 = √(1 - t²X†X)
// ---------------------------------------------------------------------------

struct EtRow {
    double t;
    bool feasible;             // 1 - t²X†X ⪰ 0
    bool extremal;             // {M_i†M_j} independent at this t
    double b_t;                // max entropy drop
    double entropic_floor;     // k_BT·B_t: least α allowed by the entropic bound
    double extremal_floor;     // k_BT·ln 2: least α allowed for the extremal operation
    double paper_q_trace;      // e^{-t²} + t² of the literal diagonal choice
    double admissible_q_norm;  // ‖βQ(t)‖_max of the certified nearby admissible HTO
    Matrix admissible_q;       // that HTO (energy units × β already applied? no: βQ)
};

KrausChannel et_channel(const Matrix& x, double t);
std::vector<EtRow> et_family_study(const Matrix& x, const std::vector<double>& t_grid,
                                   double beta, std::uint64_t seed = 5, int starts = 32);

} // namespace heatops
