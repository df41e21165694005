// realizations.hpp — Dense realizations of quantum operations on thermal baths
// and their heat transfer operators.

#pragma once

#include "heatops/channels.hpp"
#include "heatops/operators.hpp"

namespace heatops {

namespace tol {
inline constexpr double hto_formula_agreement = 1e-8;  // energy vs dimensionless HTO routes
inline constexpr double rider_residual        = 1e-12;
inline constexpr int    rider_max_iterations  = 200;
} // namespace tol

// A bath Hamiltonian, its inverse temperature and an isometry on device⊗bath.
// The bath input and output spaces usually coincide; rectangular isometries
// from chain truncations may grow the output space, in which case bath_h_out
// carries the output-space Hamiltonian.
class DenseRealization {
public:
    DenseRealization(int dim_a, HermitianOperator bath_h, double beta, Isometry v);
    DenseRealization(int dim_a, HermitianOperator bath_h, HermitianOperator bath_h_out,
                     double beta, Isometry v);

    int dim_a() const { return dim_a_; }
    int dim_bath_in() const { return bath_h_.dim(); }
    int dim_bath_out() const { return bath_h_out_.dim(); }
    bool square() const { return v_.dim_in() == v_.dim_out(); }
    const HermitianOperator& bath_h() const { return bath_h_; }
    const HermitianOperator& bath_h_out() const { return bath_h_out_; }
    double beta() const { return beta_; }
    const Isometry& isometry() const { return v_; }

private:
    int dim_a_;
    HermitianOperator bath_h_;
    HermitianOperator bath_h_out_;
    double beta_;
    Isometry v_;
};

struct HeatReport {
    HermitianOperator hto;       // energy units, on the device
    KrausChannel channel;        // induced operation, minimal
    double j_of_beta_q;          // J(βQ)
    double bath_log_partition;   // ln Z_B of the input bath
};

// Channel ρ ↦ tr_B V(ρ⊗ρ_B)V†, extracted by purifying ρ_B in its eigenbasis
// and minimalized through the Choi form.
KrausChannel induced_channel(const DenseRealization& r);

// HTO of the realization. Computed in energy units from the bath Hamiltonian
// and cross-checked against the dimensionless ln ρ_B route; disagreement
// beyond tol::hto_formula_agreement raises numeric_error.
HeatReport compute_hto(const DenseRealization& r);
HermitianOperator compute_hto_operator(const DenseRealization& r);

double average_heat(const HeatReport& report, const DensityMatrix& rho);
double average_heat(const HermitianOperator& hto, const DensityMatrix& rho);

double total_work(const HeatReport& report, const DensityMatrix& rho,
                  const HermitianOperator& h_a, const HermitianOperator& h_a_prime);

// Gap Δ of a two-level system dumping constant heat a at inverse temperature
// beta: the root of Δ·tanh(βΔ/2) = a.
double rider_gap(double a, double beta);

// Appends a two-level bath system flipped by σ_x; the HTO gains a·1.
DenseRealization add_heat_rider(const DenseRealization& r, double a);

// Probabilistic controller: bath gains an n-level system C in a designed
// thermal diagonal state Σ λ_i |i><i|; the isometry becomes Σ V_i ⊗ |i><i|.
// Realizes the convex combination of the inputs; zero weights are dropped.
DenseRealization controller_combine(const std::vector<DenseRealization>& rs,
                                    const std::vector<double>& weights);

// Reduced final bath state tr_A V(ρ⊗ρ_B)V†, used by the deviation identity
// ΔE_B = (1/β)[S(ρ'_B‖ρ_B) + S(ρ'_B) - S(ρ_B)].
DensityMatrix final_bath_state(const DenseRealization& r, const DensityMatrix& rho);
double bath_energy_change(const DenseRealization& r, const DensityMatrix& rho);

} // namespace heatops
