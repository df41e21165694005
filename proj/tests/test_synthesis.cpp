// test_synthesis.cpp — chain constructions, Δ targeting, dense oracles.

#include <doctest.h>

#include <cmath>

#include "heatops/random.hpp"
#include "heatops/synthesis.hpp"

using namespace heatops;

namespace {

Vector ground_vector(int d) {
    Vector v = Vector::Zero(d);
    v(0) = 1.0;
    return v;
}

HermitianOperator scaled_identity(int d, double value) {
    return HermitianOperator::identity(d, Units::energy).scaled(value);
}

// Admissible target with controlled gaps: spectrum {0, gaps...} shifted so
// J(βq) lands exactly on j_target, then rotated by a random unitary.
HermitianOperator gapped_hto(Rng& rng, int d, double j_target, double beta,
                             double min_gap) {
    RealVector levels(d);
    levels(0) = 0.0;
    for (int i = 1; i < d; ++i)
        levels(i) = levels(i - 1) + min_gap + rng.uniform(0.0, 2.0);
    const double j_now = j_function((beta * levels).eval());
    levels.array() += (j_target - j_now) / beta;
    const Matrix u = random_unitary(rng, d);
    const Matrix q = u * levels.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint();
    return {hermitize(q), Units::energy};
}

} // namespace

TEST_CASE("schedules") {
    RealVector base(3);
    base << 0.0, 0.5, 2.0;
    const LevelSchedule sched{ScheduleKind::x_type, base, 1.0};
    CHECK(sched.level(0, 0.9) == 0.0);                               // pinned ground level
    CHECK(sched.level(1, 0.0) == doctest::Approx(0.5));              // ε_i(0) = base_i
    CHECK(sched.level(2, 0.5) == doctest::Approx(3.0));              // + ν/(1-ν)
    CHECK(sched.level(1, 0.999) > 500.0);                            // divergence toward 1

    SUBCASE("nu sequence is strictly increasing from zero") {
        double prev = -1.0;
        for (int k = 1; k <= 40; ++k) {
            const double nu = nu_value(k, 2.5);
            CHECK(nu > prev);
            CHECK(nu < 1.0);
            prev = nu;
        }
        CHECK(nu_value(1, 2.5) == 0.0);
    }
}

TEST_CASE("swap equality case") {
    Rng rng(101);
    SUBCASE("maximally mixed target is thermodynamically free") {
        const DenseRealization r =
            swap_equality_case(DensityMatrix::maximally_mixed(2), Matrix::Identity(2, 2), 1.0);
        CHECK(max_abs(compute_hto_operator(r).matrix()) < 1e-12);
    }
    SUBCASE("random full-rank targets reproduce the spectral formula exactly") {
        for (int i = 0; i < 10; ++i) {
            const int d = 2 + rng.uniform_int(0, 2);
            const DensityMatrix rho0 = random_density(rng, d);
            const Matrix w = random_unitary(rng, d);
            const double beta = rng.uniform(0.4, 2.5);
            const DenseRealization r = swap_equality_case(rho0, w, beta);
            const HermitianOperator q = compute_hto_operator(r);
            const Matrix expect =
                -(w.adjoint() *
                  (log_floored_reference(rho0) +
                   von_neumann_entropy(rho0) * Matrix::Identity(d, d)) *
                  w) /
                beta;
            CHECK(max_abs(q.matrix() - expect) < 1e-12);
            CHECK(j_function(q.scaled(beta).matrix()) ==
                  doctest::Approx(-von_neumann_entropy(rho0)).epsilon(1e-10));
        }
    }
    SUBCASE("sigma_x conjugation relabels the HTO") {
        const DensityMatrix rho0 =
            DensityMatrix::diagonal((RealVector(2) << 2.0 / 3.0, 1.0 / 3.0).finished());
        Matrix flip(2, 2);
        flip << 0, 1, 1, 0;
        const Matrix q_id =
            compute_hto_operator(swap_equality_case(rho0, Matrix::Identity(2, 2), 1.0)).matrix();
        const Matrix q_flip = compute_hto_operator(swap_equality_case(rho0, flip, 1.0)).matrix();
        CHECK(max_abs(q_flip - flip * q_id * flip) < 1e-12);
    }
    SUBCASE("rank-deficient targets are rejected") {
        CHECK_THROWS_AS(
            swap_equality_case(DensityMatrix::basis_state(2, 0), Matrix::Identity(2, 2), 1.0),
            inadmissible_error);
    }
}

TEST_CASE("landauer admissibility gate") {
    const Vector psi0 = ground_vector(2);
    SUBCASE("tr e^{-βq} < 1 accepted") {
        CHECK_NOTHROW(
            synthesize_landauer(scaled_identity(2, std::log(2.0) + 0.1), 1.0, psi0, 60, 1e-6));
    }
    SUBCASE("tr e^{-βq} > 1 rejected") {
        CHECK_THROWS_AS(
            synthesize_landauer(scaled_identity(2, std::log(2.0) - 0.1), 1.0, psi0, 60, 1e-6),
            inadmissible_error);
    }
    SUBCASE("degenerate one-level device") {
        const ChainRealization rider =
            synthesize_landauer(scaled_identity(1, 0.7), 2.0, ground_vector(1), 4, 1e-8);
        CHECK(rider.is_rider());
        CHECK(rider.delta_achieved == doctest::Approx(0.7).epsilon(1e-11));
        CHECK(max_abs(achieved_hto(rider).matrix() -
                      Matrix::Constant(1, 1, 0.7)) < 1e-10);
        CHECK_THROWS_AS(
            synthesize_landauer(scaled_identity(1, 0.0), 1.0, ground_vector(1), 4, 1e-8),
            inadmissible_error);
        CHECK_THROWS_AS(
            synthesize_landauer(scaled_identity(1, -0.5), 1.0, ground_vector(1), 4, 1e-8),
            inadmissible_error);
        SUBCASE("rider dense oracle") {
            const OracleReport oracle = dense_oracle_check(rider);
            CHECK(oracle.max_heat_mismatch < 1e-10);
            CHECK(oracle.hto_mismatch < 1e-10);
        }
    }
}

TEST_CASE("landauer synthesis round trip") {
    Rng rng(103);
    const int n = 30;
    for (int i = 0; i < 8; ++i) {
        const int d = 2 + rng.uniform_int(0, 2);
        const double beta = rng.uniform(0.5, 2.0);
        const double j_target = rng.uniform(0.05, 3.0);
        const HermitianOperator q = gapped_hto(rng, d, j_target, beta, 3.0);
        Vector psi0 = random_pure(rng, d);
        const ChainRealization chain = synthesize_landauer(q, beta, psi0, n, 1e-8);

        CHECK(std::abs(chain.delta_achieved - chain.target_delta) <= 1e-10);
        CHECK(chain.eps_tail_x <= 1e-8);
        CHECK(max_abs(achieved_hto(chain).matrix() - q.matrix()) < 1e-6);
        CHECK(chain_channel_error(chain) <= d * std::max(chain.eps_tail_x, 1e-300));
        // Szilard certificate with positive margin.
        const double tr_exp =
            std::exp(-j_function(achieved_hto(chain).scaled(beta).matrix()));
        CHECK(tr_exp < 1.0);
        CHECK(1.0 - tr_exp == doctest::Approx(1.0 - std::exp(-j_target)).epsilon(1e-6));
        // ln Z_B is finite and recorded.
        CHECK(std::isfinite(chain.ln_z_b));
    }
}

TEST_CASE("delta forms agree and the bracket is honest") {
    Rng rng(107);
    const Vector psi0 = ground_vector(2);
    const HermitianOperator q = gapped_hto(rng, 2, 0.8, 1.0, 2.0);
    SUBCASE("energy and relative-entropy series agree at many scales") {
        for (double s : {0.05, 0.3, 1.0, 4.0, 20.0}) {
            const ChainRealization chain = build_landauer_chain(q, 1.0, psi0, 12, s);
            CHECK(std::abs(chain_delta(chain) - chain_delta_relative_entropy_form(chain)) <
                  1e-10);
        }
    }
    SUBCASE("delta spans the target from above and below") {
        const ChainRealization coarse = build_landauer_chain(q, 1.0, psi0, 12, 1e-3);
        const ChainRealization fine = build_landauer_chain(q, 1.0, psi0, 12, 1e3);
        CHECK(chain_delta(coarse) > 0.8);
        CHECK(chain_delta(fine) < 0.8);
    }
    SUBCASE("fine schedules drive delta to zero") {
        const ChainRealization fine = build_landauer_chain(q, 1.0, psi0, 40, 500.0);
        CHECK(chain_delta(fine) < 0.05);
    }
    SUBCASE("structured accounting reproduces the offset identity at untuned s") {
        const ChainRealization chain = build_landauer_chain(q, 1.0, psi0, 12, 2.0);
        for (int i = 0; i < 5; ++i) {
            const DensityMatrix rho = random_density(rng, 2);
            const double de = structured_heat_accounting(chain, rho);
            const double heat = (rho.matrix() * q.matrix()).trace().real();
            CHECK(de - heat ==
                  doctest::Approx(chain_delta(chain) - chain.target_delta).epsilon(1e-10));
        }
    }
}

TEST_CASE("landauer dense oracle at N = 3") {
    Rng rng(109);
    for (int i = 0; i < 10; ++i) {
        const double beta = rng.uniform(0.5, 2.0);
        const HermitianOperator q = gapped_hto(rng, 2, rng.uniform(0.1, 1.5), beta, 0.5);
        const ChainRealization chain =
            synthesize_landauer(q, beta, random_pure(rng, 2), 3, 0.9);
        const OracleReport oracle = dense_oracle_check(chain, 20, 1000 + i);
        CHECK(oracle.max_heat_mismatch <= 1e-10);
        CHECK(oracle.hto_mismatch <= 1e-8);
        CHECK(oracle.channel_error_dense <= oracle.channel_error_bound + 1e-12);
        CHECK(oracle.delta_form_mismatch <= 1e-10);
    }
}

TEST_CASE("complete erasure synthesis") {
    Rng rng(113);
    SUBCASE("pure rho0 reduces to the Landauer case") {
        const HermitianOperator q = gapped_hto(rng, 2, 0.6, 1.0, 2.5);
        Vector psi = random_pure(rng, 2);
        const ChainRealization chain =
            synthesize_complete_erasure(q, 1.0, DensityMatrix::pure(psi), 6, 30, 1e-8);
        CHECK(chain.rank_y == 1);
        CHECK(chain.target_delta == doctest::Approx(j_function(q.matrix())).epsilon(1e-9));
        const DensityMatrix out = chain_output_state(chain);
        CHECK(trace_distance(out, DensityMatrix::pure(psi)) < 1e-12);
    }
    SUBCASE("equality case is rejected strictly, a shifted target passes") {
        const DensityMatrix rho0 =
            DensityMatrix::diagonal((RealVector(2) << 2.0 / 3.0, 1.0 / 3.0).finished());
        const double s0 = von_neumann_entropy(rho0);
        RealVector q_eq(2);
        q_eq << -std::log(2.0 / 3.0) - s0, -std::log(1.0 / 3.0) - s0;
        const HermitianOperator q_boundary =
            HermitianOperator::diagonal(q_eq, Units::energy);
        CHECK_THROWS_AS(synthesize_complete_erasure(q_boundary, 1.0, rho0, 10, 10, 1e-6),
                        inadmissible_error);
        const HermitianOperator q_ok = q_boundary.shifted(0.05);
        CHECK(j_function(q_ok.matrix()) == doctest::Approx(-s0 + 0.05).epsilon(1e-10));
        CHECK_NOTHROW(synthesize_complete_erasure(q_ok, 1.0, rho0, 40, 40, 1e-6));
    }
    SUBCASE("round trip with exact channel") {
        for (int i = 0; i < 4; ++i) {
            const int d = 2 + rng.uniform_int(0, 1);
            const double beta = rng.uniform(0.5, 1.5);
            const DensityMatrix rho0 = random_density(rng, d);
            const HermitianOperator q = gapped_hto(rng, d, rng.uniform(0.3, 2.0), beta, 3.0);
            const ChainRealization chain =
                synthesize_complete_erasure(q, beta, rho0, 25, 25, 1e-8);
            CHECK(std::abs(chain.delta_achieved - chain.target_delta) <= 1e-10);
            CHECK(max_abs(achieved_hto(chain).matrix() - q.matrix()) < 1e-6);
            // The two-chain construction feeds the device from the Y-chain, so
            // the channel is exact regardless of truncation.
            CHECK(chain_channel_error(chain) < 1e-12);
            CHECK(chain.eps_tail_x <= 1e-8);
            CHECK(chain.eps_tail_y <= 1e-8);
            // Theorem-2 margin of the achieved HTO.
            const double j_hat = j_function(achieved_hto(chain).scaled(beta).matrix());
            CHECK(j_hat + von_neumann_entropy(rho0) > 0.0);
        }
    }
    SUBCASE("dense oracle at M = 1, N = 3 (joint dimension 32)") {
        for (int i = 0; i < 6; ++i) {
            const double beta = rng.uniform(0.6, 1.4);
            const DensityMatrix rho0 = random_density(rng, 2);
            const HermitianOperator q = gapped_hto(rng, 2, rng.uniform(0.2, 1.0), beta, 0.5);
            const ChainRealization chain =
                synthesize_complete_erasure(q, beta, rho0, 1, 3, 0.9);
            const OracleReport oracle = dense_oracle_check(chain, 20, 2000 + i);
            CHECK(oracle.max_heat_mismatch <= 1e-10);
            CHECK(oracle.hto_mismatch <= 1e-8);
            CHECK(oracle.channel_error_dense <= 1e-9);
            CHECK(oracle.delta_form_mismatch <= 1e-10);
        }
    }
    SUBCASE("rank-deficient rho0 runs through the padded alphabet") {
        RealVector probs(3);
        probs << 0.7, 0.3, 0.0;
        const DensityMatrix rho0 = DensityMatrix::diagonal(probs);
        const HermitianOperator q = gapped_hto(rng, 3, 0.8, 1.0, 3.0);
        const ChainRealization chain = synthesize_complete_erasure(q, 1.0, rho0, 1, 3, 0.9);
        CHECK(chain.rank_y == 2);
        const OracleReport oracle = dense_oracle_check(chain, 10, 77);
        CHECK(oracle.max_heat_mismatch <= 1e-10);
        CHECK(oracle.channel_error_dense <= 1e-9);
    }
}

TEST_CASE("infeasible chains raise the documented errors") {
    const Vector psi0 = ground_vector(2);
    // Degenerate spectrum with small J cannot reach both the Δ target and the
    // tail bound at short chain lengths.
    const HermitianOperator tight = scaled_identity(2, std::log(2.0) + 0.02);
    CHECK_THROWS_AS(synthesize_landauer(tight, 1.0, psi0, 10, 1e-8), truncation_error);
    CHECK_NOTHROW(synthesize_landauer(tight, 1.0, psi0, 400, 1e-8));
}

TEST_CASE("design min heat erasure") {
    Rng rng(127);
    SUBCASE("maximally mixed qubit at epsilon = 0.01") {
        const auto [q, chain] =
            design_min_heat_erasure(DensityMatrix::maximally_mixed(2), 1.0, 0.01, 800);
        const double heat =
            structured_heat_accounting(chain, DensityMatrix::maximally_mixed(2));
        CHECK(heat == doctest::Approx(std::log(2.0) + 0.01).epsilon(1e-8));
        CHECK(j_function(q.matrix()) == doctest::Approx(0.01).epsilon(1e-10));
    }
    SUBCASE("near-pure average state erases almost for free") {
        const double floor_w = 1e-6;
        RealVector probs(2);
        probs << 1.0 - floor_w, floor_w;
        const DensityMatrix rho_avg = DensityMatrix::diagonal(probs);
        const double eps = 0.05;
        const auto [q, chain] = design_min_heat_erasure(rho_avg, 1.0, eps, 60);
        const double heat = structured_heat_accounting(chain, rho_avg);
        const double bound = von_neumann_entropy(rho_avg);
        CHECK(heat == doctest::Approx(bound + eps).epsilon(1e-8));
        CHECK(heat <= bound + eps + 1e-8);
        CHECK(heat == doctest::Approx(eps).epsilon(0.01));  // S(ρ_avg) ≈ 1.5e-5
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(
            design_min_heat_erasure(DensityMatrix::maximally_mixed(2), 1.0, 0.0, 30),
            inadmissible_error);
        CHECK_THROWS_AS(design_min_heat_erasure(DensityMatrix::basis_state(2, 0), 1.0, 0.1, 30),
                        inadmissible_error);
    }
}

TEST_CASE("truncated shift realization") {
    Rng rng(131);
    for (int i = 0; i < 6; ++i) {
        const int n = 2 + rng.uniform_int(0, 1);
        const double beta = rng.uniform(0.5, 2.0);
        const HermitianOperator q = gapped_hto(rng, n, rng.uniform(0.1, 2.0), beta, 0.8);
        const ShiftRealization shift = truncated_shift_realization(q.matrix(), beta, 3);

        SUBCASE("couplers are exact isometries onto orthogonal subspaces") {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const Matrix gram =
                        shift.couplers[a].adjoint() * shift.couplers[b];
                    Matrix expect = Matrix::Zero(gram.rows(), gram.cols());
                    if (a == b) expect = Matrix::Identity(gram.rows(), gram.cols());
                    CHECK(max_abs(gram - expect) < 1e-12);
                }
        }
        SUBCASE("the realization erases to the ground state with HTO = q") {
            const HeatReport report = compute_hto(shift.realization);
            CHECK(max_abs(report.hto.matrix() - q.matrix()) < 1e-8);
            CHECK(channel_distance(report.channel,
                                   KrausChannel::complete_erasure(
                                       DensityMatrix::basis_state(n, 0), n),
                                   16, 5) < 1e-10);
        }
    }
    SUBCASE("inadmissible targets are refused") {
        CHECK_THROWS_AS(
            truncated_shift_realization(Matrix::Zero(2, 2), 1.0, 3),
            inadmissible_error);
    }
}
