// realizations.cpp

#include "heatops/realizations.hpp"

#include <cmath>

namespace heatops {

namespace {

void check_units_energy(const HermitianOperator& h, const char* what) {
    if (h.units() != Units::energy)
        throw shape_error(std::string(what) + ": bath Hamiltonian must carry energy units");
}

} // namespace

DenseRealization::DenseRealization(int dim_a, HermitianOperator bath_h, double beta, Isometry v)
    : DenseRealization(dim_a, bath_h, bath_h, beta, std::move(v)) {}

DenseRealization::DenseRealization(int dim_a, HermitianOperator bath_h,
                                   HermitianOperator bath_h_out, double beta, Isometry v)
    : dim_a_(dim_a),
      bath_h_(std::move(bath_h)),
      bath_h_out_(std::move(bath_h_out)),
      beta_(beta),
      v_(std::move(v)) {
    check_units_energy(bath_h_, "DenseRealization");
    check_units_energy(bath_h_out_, "DenseRealization");
    if (dim_a_ < 1) throw shape_error("DenseRealization: dim_A must be positive");
    if (!(beta_ > 0.0) || !std::isfinite(beta_))
        throw shape_error("DenseRealization: beta must be finite and positive");
    if (v_.dim_in() != dim_a_ * bath_h_.dim())
        throw shape_error("DenseRealization: isometry input is not device ⊗ input bath");
    if (v_.dim_out() != dim_a_ * bath_h_out_.dim())
        throw shape_error("DenseRealization: isometry output is not device ⊗ output bath");
    if (bath_h_.dim() == bath_h_out_.dim() &&
        max_abs(bath_h_.matrix() - bath_h_out_.matrix()) > 0.0)
        throw shape_error("DenseRealization: coinciding bath spaces must share one Hamiltonian");
    // Thermal state must be full rank; with finite energies this can only fail
    // by underflow of e^{-β(E_max - E_min)}.
    const SpectralDecomposition sd = spectral(bath_h_);
    const double spread = beta_ * (sd.eigenvalues.maxCoeff() - sd.eigenvalues.minCoeff());
    if (std::exp(-spread) == 0.0)
        throw invariant_error("DenseRealization: bath thermal state underflows to rank deficiency");
}

// ---------------------------------------------------------------------------
// Induced channel
// ---------------------------------------------------------------------------

KrausChannel induced_channel(const DenseRealization& r) {
    const int da = r.dim_a();
    const int db_in = r.dim_bath_in();
    const int db_out = r.dim_bath_out();
    const GibbsState gs = gibbs_state(r.bath_h(), r.beta());
    const SpectralDecomposition bath = spectral(gs.state.matrix());
    const Matrix& v = r.isometry().matrix();

    // Kraus operators √p_b <b'|V|b> accumulated directly into the Choi matrix.
    Matrix choi = Matrix::Zero(static_cast<long>(da) * da, static_cast<long>(da) * da);
    Matrix block(da, da);
    Vector vec(static_cast<long>(da) * da);
    for (int b = 0; b < db_in; ++b) {
        const double p = bath.eigenvalues(b);
        if (p <= 0.0) continue;
        // V applied to the bath eigenvector |b>, reshaped to (a_out, b_out) x a_in.
        Matrix v_b(static_cast<long>(da) * db_out, da);
        for (int a_in = 0; a_in < da; ++a_in)
            v_b.col(a_in) = v.middleCols(static_cast<long>(a_in) * db_in, db_in) *
                            bath.eigenvectors.col(b);
        for (int b_out = 0; b_out < db_out; ++b_out) {
            for (int a_out = 0; a_out < da; ++a_out)
                for (int a_in = 0; a_in < da; ++a_in)
                    block(a_out, a_in) = v_b(static_cast<long>(a_out) * db_out + b_out, a_in);
            const double scale = p;
            for (int i = 0; i < da; ++i)
                for (int a = 0; a < da; ++a) vec(static_cast<long>(i) * da + a) = block(a, i);
            choi += scale * (vec * vec.adjoint());
        }
    }
    return from_choi(ChoiMatrix(hermitize(choi), da, da));
}

// ---------------------------------------------------------------------------
// HTO
// ---------------------------------------------------------------------------

namespace {

// tr_B[(1_A ⊗ ρ_B) V†(1_A ⊗ M_out)V] for a hermitian M_out on the output bath.
// The identity factors are applied blockwise instead of materializing krons.
Matrix bath_sandwich(const DenseRealization& r, const Matrix& rho_b, const Matrix& m_out) {
    const int da = r.dim_a();
    const int db_in = r.dim_bath_in();
    const int db_out = r.dim_bath_out();
    const Matrix& v = r.isometry().matrix();
    Matrix mv(v.rows(), v.cols());
    for (int a = 0; a < da; ++a)
        mv.middleRows(static_cast<long>(a) * db_out, db_out) =
            m_out * v.middleRows(static_cast<long>(a) * db_out, db_out);
    const Matrix sandwich = v.adjoint() * mv;  // on device ⊗ input bath
    Matrix weighted(sandwich.rows(), sandwich.cols());
    for (int a = 0; a < da; ++a)
        weighted.middleCols(static_cast<long>(a) * db_in, db_in) =
            sandwich.middleCols(static_cast<long>(a) * db_in, db_in) * rho_b;
    return partial_trace(weighted, {da, db_in}, {0});
}

} // namespace

HermitianOperator compute_hto_operator(const DenseRealization& r) {
    const double beta = r.beta();
    const GibbsState in = gibbs_state(r.bath_h(), beta);
    const double e_b = (in.state.matrix() * r.bath_h().matrix()).trace().real();

    // Energy-units route: Q = tr_B[(1⊗ρ_B)V†(1⊗H_B')V] - E_B·1.
    const Matrix q_energy = bath_sandwich(r, in.state.matrix(), r.bath_h_out().matrix()) -
                            e_b * Matrix::Identity(r.dim_a(), r.dim_a());

    // Dimensionless route through ln ρ_B' on the output bath. For coinciding
    // spaces this is the no-explicit-T expression; distinct spaces pick up the
    // partition-function mismatch ln Z_out - ln Z_in.
    const GibbsState out = r.square() ? in : gibbs_state(r.bath_h_out(), beta);
    const SpectralDecomposition sd_out = spectral(r.bath_h_out());
    const RealVector log_probs =
        (-beta * sd_out.eigenvalues).array() - out.log_partition;
    const Matrix log_rho_out =
        sd_out.eigenvectors * log_probs.asDiagonal().toDenseMatrix().cast<Complex>() *
        sd_out.eigenvectors.adjoint();
    const double tr_rho_log_rho = -beta * e_b - in.log_partition;
    Matrix beta_q_alt = -bath_sandwich(r, in.state.matrix(), log_rho_out) +
                        tr_rho_log_rho * Matrix::Identity(r.dim_a(), r.dim_a());
    if (!r.square())
        beta_q_alt -= (out.log_partition - in.log_partition) *
                      Matrix::Identity(r.dim_a(), r.dim_a());

    const double mismatch = max_abs(beta * q_energy - beta_q_alt);
    if (mismatch > tol::hto_formula_agreement)
        throw numeric_error("compute_hto: energy and dimensionless routes disagree by " +
                            std::to_string(mismatch));
    return HermitianOperator(hermitize(q_energy), Units::energy);
}

HeatReport compute_hto(const DenseRealization& r) {
    HermitianOperator q = compute_hto_operator(r);
    KrausChannel channel = induced_channel(r);
    const double j = j_function(q.scaled(r.beta()).matrix());
    const double ln_z = gibbs_state(r.bath_h(), r.beta()).log_partition;
    return HeatReport{std::move(q), std::move(channel), j, ln_z};
}

double average_heat(const HermitianOperator& hto, const DensityMatrix& rho) {
    if (hto.dim() != rho.dim()) throw shape_error("average_heat: dimension mismatch");
    return (rho.matrix() * hto.matrix()).trace().real();
}

double average_heat(const HeatReport& report, const DensityMatrix& rho) {
    return average_heat(report.hto, rho);
}

double total_work(const HeatReport& report, const DensityMatrix& rho,
                  const HermitianOperator& h_a, const HermitianOperator& h_a_prime) {
    if (h_a.dim() != rho.dim() || h_a_prime.dim() != report.channel.dim_out())
        throw shape_error("total_work: dimension mismatch");
    const DensityMatrix rho_out = apply(report.channel, rho);
    const double e_out = (rho_out.matrix() * h_a_prime.matrix()).trace().real();
    const double e_in = (rho.matrix() * h_a.matrix()).trace().real();
    return e_out - e_in + average_heat(report, rho);
}

// ---------------------------------------------------------------------------
// Heat rider
// ---------------------------------------------------------------------------

double rider_gap(double a, double beta) {
    if (a < 0.0) throw shape_error("rider_gap: heat amount must be nonnegative");
    if (a == 0.0) return 0.0;
    auto dumped = [beta](double gap) { return gap * std::tanh(beta * gap / 2.0); };
    double lo = 0.0, hi = a + 2.0 / beta + 1.0;
    if (dumped(hi) < a) throw numeric_error("rider_gap: bracket failure");
    double mid = hi;
    for (int it = 0; it < tol::rider_max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        (dumped(mid) < a ? lo : hi) = mid;
        if (std::abs(dumped(mid) - a) <= tol::rider_residual * std::max(1.0, a)) return mid;
    }
    if (std::abs(dumped(mid) - a) > 1e-9 * std::max(1.0, a))
        throw numeric_error("rider_gap: bisection did not converge");
    return mid;
}

DenseRealization add_heat_rider(const DenseRealization& r, double a) {
    const double gap = rider_gap(a, r.beta());
    RealVector levels(2);
    levels << gap / 2.0, -gap / 2.0;  // (Δ/2)·σ_z
    const HermitianOperator h_c = HermitianOperator::diagonal(levels, Units::energy);
    Matrix sigma_x(2, 2);
    sigma_x << 0, 1, 1, 0;

    const int db_in = r.dim_bath_in(), db_out = r.dim_bath_out();
    const HermitianOperator h_in =
        HermitianOperator(kron(r.bath_h().matrix(), Matrix::Identity(2, 2)) +
                              kron(Matrix::Identity(db_in, db_in), h_c.matrix()),
                          Units::energy);
    const HermitianOperator h_out =
        HermitianOperator(kron(r.bath_h_out().matrix(), Matrix::Identity(2, 2)) +
                              kron(Matrix::Identity(db_out, db_out), h_c.matrix()),
                          Units::energy);
    const Isometry v(kron(r.isometry().matrix(), sigma_x));
    if (r.square()) return {r.dim_a(), h_in, r.beta(), v};
    return {r.dim_a(), h_in, h_out, r.beta(), v};
}

// ---------------------------------------------------------------------------
// Controller combination
// ---------------------------------------------------------------------------

DenseRealization controller_combine(const std::vector<DenseRealization>& rs,
                                    const std::vector<double>& weights) {
    if (rs.empty() || rs.size() != weights.size())
        throw shape_error("controller_combine: realization/weight size mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw shape_error("controller_combine: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > tol::weight_sum)
        throw shape_error("controller_combine: weights sum to " + std::to_string(total));

    // Zero weights are dropped together with their realization.
    std::vector<const DenseRealization*> live;
    std::vector<double> lam;
    for (size_t i = 0; i < rs.size(); ++i) {
        if (weights[i] == 0.0) continue;
        live.push_back(&rs[i]);
        lam.push_back(weights[i]);
    }
    const DenseRealization& first = *live.front();
    for (const DenseRealization* r : live) {
        if (r->dim_a() != first.dim_a() || r->beta() != first.beta() ||
            r->dim_bath_in() != first.dim_bath_in() ||
            r->dim_bath_out() != first.dim_bath_out() ||
            max_abs(r->bath_h().matrix() - first.bath_h().matrix()) > 1e-12 ||
            max_abs(r->bath_h_out().matrix() - first.bath_h_out().matrix()) > 1e-12)
            throw shape_error("controller_combine: realizations must share device, bath and beta");
    }
    const int n = static_cast<int>(live.size());
    if (n == 1) return first;

    // Controller levels ε_i = -(1/β) ln λ_i give the thermal state Σ λ_i |i><i|
    // with ζ_C = 1 exactly.
    RealVector eps(n);
    for (int i = 0; i < n; ++i) eps(i) = -std::log(lam[i]) / first.beta();
    const HermitianOperator h_c = HermitianOperator::diagonal(eps, Units::energy);

    const int da = first.dim_a();
    const int db_in = first.dim_bath_in(), db_out = first.dim_bath_out();
    const HermitianOperator h_in =
        HermitianOperator(kron(first.bath_h().matrix(), Matrix::Identity(n, n)) +
                              kron(Matrix::Identity(db_in, db_in), h_c.matrix()),
                          Units::energy);
    const HermitianOperator h_out =
        HermitianOperator(kron(first.bath_h_out().matrix(), Matrix::Identity(n, n)) +
                              kron(Matrix::Identity(db_out, db_out), h_c.matrix()),
                          Units::energy);

    // V = Σ_i V_i ⊗ |i><i|_C on device ⊗ (bath ⊗ C).
    Matrix v = Matrix::Zero(static_cast<long>(da) * db_out * n,
                            static_cast<long>(da) * db_in * n);
    for (int i = 0; i < n; ++i) {
        Matrix proj = Matrix::Zero(n, n);
        proj(i, i) = 1.0;
        const Matrix& vi = live[static_cast<size_t>(i)]->isometry().matrix();
        // Reorder device ⊗ bath ⊗ C from (device ⊗ bath) ⊗ C blocks.
        for (int ar = 0; ar < da; ++ar)
            for (int ac = 0; ac < da; ++ac) {
                const Matrix block = vi.block(static_cast<long>(ar) * db_out,
                                              static_cast<long>(ac) * db_in, db_out, db_in);
                v.block(static_cast<long>(ar) * db_out * n, static_cast<long>(ac) * db_in * n,
                        static_cast<long>(db_out) * n, static_cast<long>(db_in) * n) +=
                    kron(block, proj);
            }
    }
    if (first.square()) return {da, h_in, first.beta(), Isometry(std::move(v))};
    return {da, h_in, h_out, first.beta(), Isometry(std::move(v))};
}

// ---------------------------------------------------------------------------
// Final bath state and the deviation identity
// ---------------------------------------------------------------------------

DensityMatrix final_bath_state(const DenseRealization& r, const DensityMatrix& rho) {
    if (rho.dim() != r.dim_a()) throw shape_error("final_bath_state: dimension mismatch");
    const GibbsState gs = gibbs_state(r.bath_h(), r.beta());
    const Matrix joint_in = kron(rho.matrix(), gs.state.matrix());
    const Matrix joint_out = r.isometry().matrix() * joint_in * r.isometry().matrix().adjoint();
    return DensityMatrix(
        hermitize(partial_trace(joint_out, {r.dim_a(), r.dim_bath_out()}, {1})));
}

double bath_energy_change(const DenseRealization& r, const DensityMatrix& rho) {
    const GibbsState gs = gibbs_state(r.bath_h(), r.beta());
    const DensityMatrix rho_b_final = final_bath_state(r, rho);
    const double e_in = (gs.state.matrix() * r.bath_h().matrix()).trace().real();
    const double e_out = (rho_b_final.matrix() * r.bath_h_out().matrix()).trace().real();
    return e_out - e_in;
}

} // namespace heatops
