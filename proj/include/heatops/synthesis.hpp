// synthesis.hpp — Constructive erasure realizations on finite bath chains:
// level schedules, shift isometries with cyclic closure, Δ-targeting by
// bisection, and closed-form (structured) energy accounting validated against
// dense computation.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "heatops/realizations.hpp"

namespace heatops {

namespace tol {
inline constexpr double delta_target     = 1e-10;  // |Δ - Δ_target| after bisection
inline constexpr double rank_threshold   = 1e-12;  // eigenvalue cut for rank(ρ0)
inline constexpr long   dense_chain_cap  = 1L << 12;  // total dimension for materialization
inline constexpr double pad_level_offset = 70.0;   // β·ε of padding levels above the active top
} // namespace tol

enum class ScheduleKind { x_type, y_type };

// Site level family ε_i(ν): ε_0 ≡ 0, ε_i(ν) = base_i + c·ν/(1-ν) for i ≥ 1.
// Continuous on [0,1), diverging as ν → 1, with ε_i(0) = base_i.
struct LevelSchedule {
    ScheduleKind kind = ScheduleKind::x_type;
    RealVector base;  // base(0) == 0, nondecreasing
    double c = 1.0;

    int levels() const { return static_cast<int>(base.size()); }
    double level(int i, double nu) const;
    RealVector levels_at(double nu) const;
};

// Thermal data of one chain site at parameter ν.
struct SiteThermal {
    RealVector energies;
    RealVector probs;
    double log_zeta;
    double entropy;
    double mean_energy;
};
SiteThermal site_thermal(const LevelSchedule& schedule, double nu, double beta);

// ν_k = (k-1)/((k-1)+s), k ≥ 1: strictly increasing from 0, converging to 1.
// Large s gives fine increments (small Δ), small s coarse ones (large Δ).
double nu_value(int k, double s);

enum class ChainKind { landauer, complete_erasure };

// A finite shift-chain realization. The device content (in the eigenbasis of
// the target HTO) flows into the X-chain; for complete erasures a Y-chain
// feeds copies of ρ0's spectrum back into the device. The last X-site wraps
// around (to the device through the ψ0-completion basis for Landauer chains,
// to the outer Y-site for complete erasures) so the finite map is exactly a
// permutation isometry; truncation error lives in the last sites' excited
// weights.
struct ChainRealization {
    ChainKind kind = ChainKind::landauer;
    int dim_a = 0;
    int rank_y = 1;            // rank of ρ0 (1 for Landauer)
    LevelSchedule schedule_x;
    LevelSchedule schedule_y;  // padded to dim_a levels when rank_y < dim_a
    double s = 0.0;
    int n_x = 0;               // X-chain length N
    int n_y = 0;               // Y-chain length M (0 for Landauer)
    double beta = 0.0;
    Matrix target_q;           // energy units, on the device
    Matrix device_to_x;        // eigenvectors of target_q, ascending eigenvalues
    Matrix out_basis;          // Landauer: ψ0-completion; erasure: eigenvectors of ρ0, descending
    RealVector rho0_probs;     // descending eigenvalues of ρ0 (size rank_y)
    double target_delta = 0.0;
    double delta_achieved = 0.0;
    double eps_tail_x = 0.0;
    double eps_tail_y = 0.0;
    double ln_z_b = 0.0;
    double rider_gap = 0.0;    // d = 1 degenerate chain: single two-level site

    HermitianOperator target_hto() const { return {target_q, Units::energy}; }
    bool is_rider() const { return rider_gap > 0.0 || (dim_a == 1 && n_x == 0); }
};

// Chain constructors at a fixed scale s (no Δ tuning, no tail checks).
ChainRealization build_landauer_chain(const HermitianOperator& q, double beta,
                                      const Vector& psi0, int n, double s, double c = 1.0);
ChainRealization build_complete_erasure_chain(const HermitianOperator& q, double beta,
                                              const DensityMatrix& rho0, int m, int n,
                                              double s, double c = 1.0);

// State-independent offset Δ of the truncated chain: the bath-energy change is
// ΔE_B = tr(ρ Q) - Δ_target + Δ for every device state ρ. Energy-difference
// series; the relative-entropy form is the same quantity through the
// deviation identity and must agree to 1e-10.
double chain_delta(const ChainRealization& chain);
double chain_delta_relative_entropy_form(const ChainRealization& chain);
double chain_log_partition(const ChainRealization& chain);

// Admissibility gate (J(βq) > 0, resp. J(βq) > -S(ρ0)), bisection of Δ to the
// target (k_BT·J, resp. k_BT(J+S(ρ0))), and tail-bound enforcement.
ChainRealization synthesize_landauer(const HermitianOperator& q, double beta,
                                     const Vector& psi0, int n, double tail_bound,
                                     double c = 1.0);
ChainRealization synthesize_complete_erasure(const HermitianOperator& q, double beta,
                                             const DensityMatrix& rho0, int m, int n,
                                             double tail_bound, double c = 1.0);

// Equality-case realization: transform by W, then swap device and bath. Exact
// complete erasure to ρ0 with HTO -(1/β)W†(ln ρ0 + S(ρ0)·1)W on a bath copy
// of the device. Requires full-rank ρ0.
DenseRealization swap_equality_case(const DensityMatrix& rho0, const Matrix& w, double beta);

// Site-by-site bath-energy change for device state ρ, in closed form (final
// site states are shifted copies of their neighbours); no joint matrices.
double structured_heat_accounting(const ChainRealization& chain, const DensityMatrix& rho);

// Q̂ = Q + (Δ - Δ_target)·1: the exact HTO of the truncated chain.
HermitianOperator achieved_hto(const ChainRealization& chain);

// Constant output state of the truncated chain, and the ideal target.
DensityMatrix chain_output_state(const ChainRealization& chain);
DensityMatrix ideal_output_state(const ChainRealization& chain);
double chain_channel_error(const ChainRealization& chain);

// Materializes the shift isometry and bath Hamiltonian densely.
DenseRealization dense_realization(const ChainRealization& chain);

struct OracleReport {
    double max_heat_mismatch;    // structured vs dense average heat
    double hto_mismatch;         // achieved_hto vs dense compute_hto
    double channel_error_dense;  // dense induced channel vs ideal erasure
    double channel_error_bound;  // d·ε_tail
    double delta_form_mismatch;  // energy vs relative-entropy series
};
OracleReport dense_oracle_check(const ChainRealization& chain, int samples = 20,
                                std::uint64_t seed = 11);

// Near-optimal erasure of a device with average state ρ_avg: HTO
// Q = -(1/β) ln ρ_avg + ε·1 and its synthesized realization. Average heat is
// (1/β)S(ρ_avg) + ε, within ε of the entropy bound.
std::pair<HermitianOperator, ChainRealization> design_min_heat_erasure(
    const DensityMatrix& rho_avg, double beta, double epsilon, int n,
    double tail_bound = 1e-8);

// Rectangular truncated shift: the bath gains one site per application so the
// finite map is an exact isometry without any wrap. The couplers L_i satisfy
// L_i†L_j = δ_ij·1 exactly, as required when lifting Kraus operators through
// U = Σ M_i ⊗ L_i.
struct ShiftRealization {
    DenseRealization realization;  // Landauer erasure on the n-level device
    std::vector<Matrix> couplers;
    double delta_achieved;
    double j_value;
};
ShiftRealization truncated_shift_realization(const Matrix& q, double beta, int sites = 3,
                                             double c = 1.0);

} // namespace heatops
