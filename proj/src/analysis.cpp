// analysis.cpp

#include "heatops/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "heatops/optimize.hpp"
#include "heatops/random.hpp"
#include "heatops/synthesis.hpp"

namespace heatops {

namespace {

Vector vec_op(const Matrix& m) {
    Vector v(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        for (Eigen::Index a = 0; a < m.rows(); ++a) v(i * m.rows() + a) = m(a, i);
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Entropic bound
// ---------------------------------------------------------------------------

LepReport check_lep(const KrausChannel& channel, const HermitianOperator& q, double beta,
                    int samples, std::uint64_t seed, int starts) {
    if (q.dim() != channel.dim_in()) throw shape_error("check_lep: dimension mismatch");
    const int d = q.dim();

    auto slack = [&](const DensityMatrix& rho) {
        const DensityMatrix out = apply(channel, rho);
        return average_heat(q, rho) -
               (von_neumann_entropy(rho) - von_neumann_entropy(out)) / beta;
    };
    auto grad = [&](const DensityMatrix& rho) -> Matrix {
        const DensityMatrix out = apply(channel, rho);
        return q.matrix() + log_floored(rho.matrix()) / beta -
               apply_adjoint(channel, log_floored(out.matrix())) / beta;
    };

    Rng rng(seed);
    double best = slack(DensityMatrix::maximally_mixed(d));
    DensityMatrix worst = DensityMatrix::maximally_mixed(d);
    for (int i = 0; i < samples; ++i) {
        const DensityMatrix rho = random_density(rng, d, 1 + rng.uniform_int(0, d - 1));
        const double v = slack(rho);
        if (v < best) {
            best = v;
            worst = rho;
        }
    }
    const StateOptimum opt = minimize_over_states(slack, grad, d, starts, seed + 1);
    if (opt.value < best) {
        best = opt.value;
        worst = opt.argmin;
    }
    return {best, worst, best >= tol::lep_slack};
}

double max_entropy_drop(const KrausChannel& channel, int starts, std::uint64_t seed) {
    auto negative_drop = [&](const DensityMatrix& rho) {
        return von_neumann_entropy(apply(channel, rho)) - von_neumann_entropy(rho);
    };
    auto grad = [&](const DensityMatrix& rho) -> Matrix {
        const DensityMatrix out = apply(channel, rho);
        return log_floored(rho.matrix()) - apply_adjoint(channel, log_floored(out.matrix()));
    };
    const StateOptimum opt =
        minimize_over_states(negative_drop, grad, channel.dim_in(), starts, seed);
    return std::max(0.0, -opt.value);
}

// ---------------------------------------------------------------------------
// Complete erasures
// ---------------------------------------------------------------------------

AdmissibilityVerdict decide_complete_erasure_hto(const HermitianOperator& q, double beta,
                                                 const DensityMatrix& rho0) {
    const double j = j_function(q.scaled(beta).matrix());
    const double s0 = von_neumann_entropy(rho0);
    const double margin = j + s0;
    if (margin > tol::boundary_window)
        return {Verdict::admissible, j, margin, "J(βQ) > -S(ρ0)", std::nullopt};
    if (margin < -tol::boundary_window)
        return {Verdict::inadmissible, j, margin, "J(βQ) < -S(ρ0)", std::nullopt};

    // Equality case: σ_βQ must be isospectral with ρ0.
    const DensityMatrix sigma = minimizer_sigma(q.scaled(beta).matrix());
    RealVector a = spectral(sigma.matrix()).eigenvalues;
    RealVector b = spectral(rho0.matrix()).eigenvalues;
    const double gap = (a - b).cwiseAbs().maxCoeff();
    if (gap <= tol::isospectral_match)
        return {Verdict::boundary, j, margin, "J(βQ) = -S(ρ0) with σ_βQ isospectral to ρ0",
                gap};
    return {Verdict::inadmissible, j, margin,
            "J(βQ) = -S(ρ0) but σ_βQ is not isospectral with ρ0", gap};
}

// ---------------------------------------------------------------------------
// Heat transfer matrices
// ---------------------------------------------------------------------------

HeatTransferMatrix extract_heat_matrix(const HermitianOperator& q_op,
                                       const KrausChannel& channel, bool require_fit) {
    if (!channel.minimal())
        throw shape_error("extract_heat_matrix: channel must be minimal");
    if (q_op.dim() != channel.dim_in())
        throw shape_error("extract_heat_matrix: HTO lives on the channel input space");
    const int n = channel.size();
    const int d = channel.dim_in();

    Matrix stack(static_cast<long>(d) * d, static_cast<long>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            stack.col(static_cast<long>(i) * n + j) =
                vec_op(channel.op(i).adjoint() * channel.op(j));

    Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const bool unique = sv(sv.size() - 1) > tol::extremal_sv * sv(0);
    svd.setThreshold(tol::extremal_sv);
    const Vector coeffs = svd.solve(vec_op(q_op.matrix()));

    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(i, j) = coeffs(static_cast<long>(i) * n + j);
    q = hermitize(q);

    Matrix recon = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            recon += q(i, j) * channel.op(i).adjoint() * channel.op(j);
    const double residual = (recon - q_op.matrix()).norm();
    const double threshold = tol::heat_matrix_fit * q_op.matrix().norm() + 1e-12;
    if (require_fit && residual > threshold)
        throw inadmissible_error(
            "extract_heat_matrix: Q is not of the form Σ q_ij M_i†M_j (residual " +
            std::to_string(residual) + "); certified non-HTO for this operation");
    return {std::move(q), residual, unique};
}

AdmissibilityVerdict decide_extremal_hto(const HermitianOperator& q_op,
                                         const KrausChannel& channel, double beta) {
    const KrausChannel minimal = minimalize(channel);
    const ExtremalityReport ext = is_extremal(minimal);
    if (!ext.extremal)
        throw shape_error(
            "decide_extremal_hto: operation is not extremal; only sufficiency is available "
            "for dependent {M_i†M_j}");
    const int n = minimal.size();

    HeatTransferMatrix htm = extract_heat_matrix(q_op, minimal);
    const double threshold = tol::heat_matrix_fit * q_op.matrix().norm() + 1e-12;
    if (htm.residual > threshold)
        return {Verdict::inadmissible, 0.0, -htm.residual,
                "Q lacks the Σ q_ij M_i†M_j structure (certified non-HTO)", std::nullopt};

    if (n == 1) {
        // Isometric operation: Q = α·1 with α ≥ 0 (non-strict).
        const double alpha = htm.q(0, 0).real();
        const Verdict v = alpha >= 0.0 ? Verdict::admissible : Verdict::inadmissible;
        return {v, beta * alpha, alpha, "n = 1: Q = α·1 requires α ≥ 0", std::nullopt};
    }
    const double j = j_function(Matrix(htm.q * beta));
    const double margin = 1.0 - std::exp(-j);  // 1 - tr e^{-βq}
    if (j > 0.0)
        return {Verdict::admissible, j, margin, "tr e^{-βq} < 1", std::nullopt};
    return {Verdict::inadmissible, j, margin, "tr e^{-βq} >= 1", std::nullopt};
}

DenseRealization realize_from_heat_matrix(const KrausChannel& channel, const Matrix& q,
                                          double beta, int sites) {
    const KrausChannel minimal = minimalize(channel);
    const int n = minimal.size();
    if (q.rows() != n || q.cols() != n)
        throw shape_error("realize_from_heat_matrix: q must be n×n for n Kraus operators");
    const ShiftRealization shift = truncated_shift_realization(q, beta, sites);

    const long bout = shift.couplers.front().rows();
    const long bin = shift.couplers.front().cols();
    const int d_in = minimal.dim_in(), d_out = minimal.dim_out();
    Matrix u = Matrix::Zero(static_cast<long>(d_out) * bout, static_cast<long>(d_in) * bin);
    for (int i = 0; i < n; ++i) u += kron(minimal.op(i), shift.couplers[i]);
    return {d_in, shift.realization.bath_h(), shift.realization.bath_h_out(), beta,
            Isometry(std::move(u))};
}

WidenCertificate widen_heat_matrix(const Matrix& q, const Matrix& s, double beta) {
    if (q.rows() != q.cols() || s.rows() != s.cols() || q.rows() != s.rows())
        throw shape_error("widen_heat_matrix: q and s must be square of equal size");
    if (max_abs(s - s.adjoint()) > tol::hermiticity)
        throw invariant_error("widen_heat_matrix: s must be hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(s), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= tol::widen_positive)
        throw shape_error(
            "widen_heat_matrix: s must be strictly positive definite (the s ⪰ 0 extension "
            "is an open conjecture and is not assumed)");

    double t = 1.0;
    auto trace_exp = [&](double tt) {
        return std::exp(-j_function(Matrix(beta * (q + tt * hermitize(s)))));
    };
    int guard = 0;
    while (trace_exp(t) >= 1.0) {
        t *= 2.0;
        if (++guard > 4000) throw numeric_error("widen_heat_matrix: no admissible t found");
    }
    return {q + hermitize(s), q + t * hermitize(s), t, trace_exp(t)};
}

// ---------------------------------------------------------------------------
// Strong subadditivity corollary
// ---------------------------------------------------------------------------

double strong_subadditivity_margin(const KrausChannel& channel, int ancilla_dim,
                                   int samples, std::uint64_t seed) {
    if (channel.dim_in() != channel.dim_out())
        throw shape_error("strong_subadditivity_margin: needs an endomorphic channel");
    const int da = channel.dim_in();
    std::vector<Matrix> lifted;
    lifted.reserve(channel.size());
    for (const Matrix& m : channel.kraus())
        lifted.push_back(kron(m, Matrix::Identity(ancilla_dim, ancilla_dim)));
    const KrausChannel channel_x(std::move(lifted));

    Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const DensityMatrix joint = random_density(rng, da * ancilla_dim);
        const DensityMatrix joint_out = apply(channel_x, joint);
        const DensityMatrix rho_a =
            DensityMatrix(hermitize(partial_trace_second(joint.matrix(), da, ancilla_dim)));
        const DensityMatrix rho_a_out = DensityMatrix(
            hermitize(partial_trace_second(joint_out.matrix(), da, ancilla_dim)));
        const double left = von_neumann_entropy(rho_a) - von_neumann_entropy(rho_a_out);
        const double right = von_neumann_entropy(joint) - von_neumann_entropy(joint_out);
        worst = std::min(worst, left - right);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// The E_t family
// ---------------------------------------------------------------------------

KrausChannel et_channel(const Matrix& x, double t) {
    if (x.rows() != x.cols()) throw shape_error("et_channel: X must be square");
    const int d = static_cast<int>(x.rows());
    const Matrix gap = Matrix::Identity(d, d) - t * t * x.adjoint() * x;
    const SpectralDecomposition sd = spectral(gap);
    if (sd.eigenvalues.minCoeff() < -1e-12)
        throw inadmissible_error("et_channel: 1 - t²X†X is indefinite at t = " +
                                 std::to_string(t));
    RealVector roots = sd.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    const Matrix m2 = sd.eigenvectors * roots.asDiagonal().toDenseMatrix().cast<Complex>() *
                      sd.eigenvectors.adjoint();
    return KrausChannel({t * x, hermitize(m2)}, true);
}

std::vector<EtRow> et_family_study(const Matrix& x, const std::vector<double>& t_grid,
                                   double beta, std::uint64_t seed, int starts) {
    std::vector<EtRow> rows;
    for (double t : t_grid) {
        EtRow row;
        row.t = t;
        row.paper_q_trace = std::exp(-t * t) + t * t;
        KrausChannel channel = KrausChannel::identity(1);
        try {
            channel = et_channel(x, t);
            row.feasible = true;
        } catch (const inadmissible_error&) {
            row.feasible = false;
            row.extremal = false;
            row.b_t = 0.0;
            row.entropic_floor = 0.0;
            row.extremal_floor = 0.0;
            row.admissible_q_norm = 0.0;
            row.admissible_q = Matrix::Zero(x.rows(), x.rows());
            rows.push_back(std::move(row));
            continue;
        }
        row.extremal = is_extremal(channel).extremal;
        row.b_t = max_entropy_drop(channel, starts, seed + static_cast<std::uint64_t>(t * 1e6));
        row.entropic_floor = row.b_t / beta;
        // For an extremal operation with n Kraus terms, Q = α·1 is an HTO iff
        // tr e^{-βα·1_n} = n e^{-βα} < 1, i.e. α > ln(n)/β.
        row.extremal_floor = row.extremal ? std::log(static_cast<double>(channel.size())) / beta
                                          : 0.0;

        // The literal diagonal βq = (ln(1/t²), t²) fails the strict trace test
        // (e^{-t²} + t² > 1 on (0,1)); lift βq_1 so that the trace lands at
        // 1 - t⁴, then certify.
        const double w1 = 1.0 - t * t * t * t - std::exp(-t * t);
        if (w1 <= 0.0) throw numeric_error("et_family_study: no nearby admissible q at t");
        const double beta_q1 = -std::log(w1);
        const double beta_q2 = t * t;
        const Matrix beta_q = beta_q1 * channel.op(0).adjoint() * channel.op(0) +
                              beta_q2 * channel.op(1).adjoint() * channel.op(1);
        const AdmissibilityVerdict verdict = decide_extremal_hto(
            HermitianOperator(hermitize(beta_q) / beta, Units::energy), channel, beta);
        if (verdict.verdict != Verdict::admissible)
            throw numeric_error("et_family_study: nearby q failed certification");
        row.admissible_q_norm = max_abs(beta_q);
        row.admissible_q = hermitize(beta_q);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace heatops
