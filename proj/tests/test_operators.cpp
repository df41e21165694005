// test_operators.cpp — operator core: types, tensor algebra, entropies, J.

#include <doctest.h>

#include <cmath>
#include <limits>

#include "heatops/operators.hpp"
#include "heatops/random.hpp"

using namespace heatops;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("hermitian operators symmetrize within tolerance and reject beyond") {
    Matrix m(2, 2);
    m << 1.0, Complex(0.5, 5e-11), Complex(0.5, -3e-11), 2.0;
    const HermitianOperator h(m, Units::energy);
    CHECK(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);

    Matrix bad(2, 2);
    bad << 1.0, Complex(0.5, 1.0), Complex(0.5, -1e-3), 2.0;
    CHECK_THROWS_AS(HermitianOperator(bad, Units::energy), invariant_error);
}

TEST_CASE("density matrix invariants") {
    CHECK_NOTHROW(DensityMatrix(diag2(0.5, 0.5)));
    CHECK_THROWS_AS(DensityMatrix(diag2(0.6, 0.5)), invariant_error);   // trace
    CHECK_THROWS_AS(DensityMatrix(diag2(1.1, -0.1)), invariant_error);  // negativity
}

TEST_CASE("isometry invariant") {
    Rng rng(3);
    CHECK_NOTHROW(random_isometry(rng, 2, 5));
    Matrix v = random_isometry(rng, 2, 4).matrix();
    v(0, 0) += 0.01;
    CHECK_THROWS_AS((Isometry{v}), invariant_error);
    CHECK_THROWS_AS((Isometry{Matrix::Identity(2, 3)}), shape_error);  // dim_out < dim_in
}

TEST_CASE("tensor products") {
    const auto id2 = HermitianOperator::identity(2, Units::dimensionless);
    const auto id3 = HermitianOperator::identity(3, Units::dimensionless);
    CHECK(max_abs(tensor(id2, id3).matrix() - Matrix::Identity(6, 6)) == 0.0);

    RealVector d01(2);
    d01 << 0.0, 1.0;
    const auto n_op = HermitianOperator::diagonal(d01, Units::energy);
    const Matrix got = tensor(n_op, n_op).matrix();
    RealVector expect(4);
    expect << 0.0, 0.0, 0.0, 1.0;  // plain Kronecker, not an additive lift
    CHECK(max_abs(got - HermitianOperator::diagonal(expect, Units::energy).matrix()) == 0.0);

    const DensityMatrix rho =
        tensor(DensityMatrix(diag2(1.0, 0.0)), DensityMatrix(diag2(0.5, 0.5)));
    RealVector probs(4);
    probs << 0.5, 0.5, 0.0, 0.0;
    CHECK(max_abs(rho.matrix() - DensityMatrix::diagonal(probs).matrix()) < 1e-15);

    CHECK_THROWS_AS(tensor(n_op, id2), shape_error);  // units mismatch
}

TEST_CASE("tensor dimension cap") {
    const auto big = HermitianOperator::identity(64, Units::dimensionless);
    const auto huge = HermitianOperator::identity(40, Units::dimensionless);
    CHECK_THROWS_AS(tensor(tensor(big, huge), big), resource_error);
}

TEST_CASE("partial trace") {
    Rng rng(11);
    const DensityMatrix a = random_density(rng, 2);
    const DensityMatrix b = random_density(rng, 3);
    const DensityMatrix ab = tensor(a, b);

    SUBCASE("product-state reduction") {
        CHECK(max_abs(partial_trace_second(ab.matrix(), 2, 3) - a.matrix()) < 1e-12);
        CHECK(max_abs(partial_trace_first(ab.matrix(), 2, 3) - b.matrix()) < 1e-12);
    }
    SUBCASE("maximally entangled marginal") {
        Vector bell = Vector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        const DensityMatrix phi = DensityMatrix::pure(bell);
        CHECK(max_abs(partial_trace_second(phi.matrix(), 2, 2) - 0.5 * Matrix::Identity(2, 2)) <
              1e-12);
    }
    SUBCASE("trace preserved on random joint states") {
        for (int i = 0; i < 20; ++i) {
            const DensityMatrix joint = random_density(rng, 6);
            const Matrix red = partial_trace(joint.matrix(), {2, 3}, {0});
            CHECK(std::abs(red.trace().real() - 1.0) < 1e-12);
        }
    }
    SUBCASE("three subsystems against a kron oracle") {
        const DensityMatrix c = random_density(rng, 2);
        const Matrix abc = kron(kron(a.matrix(), b.matrix()), c.matrix());
        CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {0, 2}) - kron(a.matrix(), c.matrix())) <
              1e-12);
        CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {1}) - b.matrix()) < 1e-12);
    }
    SUBCASE("inconsistent dims") {
        CHECK_THROWS_AS(partial_trace(ab.matrix(), {2, 2}, {0}), shape_error);
    }
}

TEST_CASE("von Neumann entropy") {
    Rng rng(5);
    CHECK(von_neumann_entropy(DensityMatrix::basis_state(4, 1)) == 0.0);
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(2)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // Two-point spectrum evaluated against the eigenvalue formula directly.
    const double expect = -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
    CHECK(expect == doctest::Approx(0.6365141682948128).epsilon(1e-14));
    CHECK(von_neumann_entropy(DensityMatrix(diag2(2.0 / 3.0, 1.0 / 3.0))) ==
          doctest::Approx(expect).epsilon(1e-13));

    SUBCASE("unitary invariance") {
        for (int i = 0; i < 30; ++i) {
            const DensityMatrix rho = random_density(rng, 4, 1 + rng.uniform_int(0, 3));
            const Matrix u = random_unitary(rng, 4);
            const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
            CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-10);
        }
    }
}

TEST_CASE("relative entropy") {
    Rng rng(7);
    SUBCASE("S(rho || rho) = 0") {
        for (int i = 0; i < 10; ++i) {
            const DensityMatrix rho = random_density(rng, 3);
            CHECK(relative_entropy(rho, rho) < 1e-10);
        }
    }
    SUBCASE("commuting pair against the scalar formula") {
        const double p = 1.0 / (1.0 + std::exp(-1.0));  // gibbs of diag(0,1) at beta 1
        const DensityMatrix sigma(diag2(0.5, 0.5));
        const DensityMatrix rho(diag2(p, 1.0 - p));
        const double oracle = 0.5 * (std::log(0.5 / p) + std::log(0.5 / (1.0 - p)));
        CHECK(relative_entropy(sigma, rho) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(0.1201).epsilon(2e-3));
    }
    SUBCASE("disjoint support is infinite") {
        CHECK(std::isinf(relative_entropy(DensityMatrix::basis_state(2, 0),
                                          DensityMatrix::basis_state(2, 1))));
    }
    SUBCASE("nonnegativity, equality only at sigma = rho") {
        for (int i = 0; i < 50; ++i) {
            const DensityMatrix sigma = random_density(rng, 3);
            const DensityMatrix rho = random_density(rng, 3);
            const double s = relative_entropy(sigma, rho);
            CHECK(s >= 0.0);
            if (s < 1e-9) CHECK(trace_distance(sigma, rho) < 1e-4);
        }
    }
}

TEST_CASE("j function") {
    CHECK(j_function(HermitianOperator::zero(2, Units::dimensionless)) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-14));

    const double g = std::log(2.0) + 0.1;
    RealVector gg(2);
    gg << g, g;
    CHECK(j_function(HermitianOperator::diagonal(gg, Units::dimensionless)) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::exp(-0.1) == doctest::Approx(0.9048).epsilon(1e-4));

    SUBCASE("energy-units input is rejected") {
        CHECK_THROWS_AS(j_function(HermitianOperator::zero(2, Units::energy)), shape_error);
    }
    SUBCASE("equality-case value: Q from rho0 = diag(2/3, 1/3)") {
        const DensityMatrix rho0(diag2(2.0 / 3.0, 1.0 / 3.0));
        const double s0 = von_neumann_entropy(rho0);
        RealVector q(2);
        q << -std::log(2.0 / 3.0) - s0, -std::log(1.0 / 3.0) - s0;
        CHECK(j_function(HermitianOperator::diagonal(q, Units::dimensionless)) ==
              doctest::Approx(-s0).epsilon(1e-12));
    }
    SUBCASE("shift identity J(G + a) = J(G) + a") {
        Rng rng(17);
        for (int i = 0; i < 20; ++i) {
            const HermitianOperator g_op = random_hermitian(rng, 4, Units::dimensionless, 2.0);
            const double a = rng.uniform(-3.0, 3.0);
            CHECK(j_function(g_op.shifted(a)) ==
                  doctest::Approx(j_function(g_op) + a).epsilon(1e-11));
        }
    }
    SUBCASE("log-sum-exp stabilization survives large spectra") {
        RealVector big(3);
        big << 500.0, 800.0, 1200.0;
        CHECK(j_function(HermitianOperator::diagonal(big, Units::dimensionless)) ==
              doctest::Approx(500.0).epsilon(1e-12));
    }
}

TEST_CASE("gibbs state") {
    Rng rng(19);
    SUBCASE("zero Hamiltonian gives the maximally mixed state") {
        const GibbsState gs = gibbs_state(HermitianOperator::zero(3, Units::energy), 2.0);
        CHECK(max_abs(gs.state.matrix() - Matrix::Identity(3, 3) / 3.0) < 1e-14);
        CHECK(gs.log_partition == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    }
    SUBCASE("two-level Boltzmann weights") {
        RealVector levels(2);
        levels << 0.0, 1.0;
        const GibbsState gs =
            gibbs_state(HermitianOperator::diagonal(levels, Units::energy), 1.0);
        const double p0 = 1.0 / (1.0 + std::exp(-1.0));
        CHECK(gs.state.matrix()(0, 0).real() == doctest::Approx(p0).epsilon(1e-14));
        CHECK(gs.state.matrix()(1, 1).real() == doctest::Approx(1.0 - p0).epsilon(1e-13));
        CHECK(p0 == doctest::Approx(0.731059).epsilon(1e-6));
    }
    SUBCASE("large gap limit") {
        RealVector levels(2);
        levels << 0.0, 50.0;
        const GibbsState gs =
            gibbs_state(HermitianOperator::diagonal(levels, Units::energy), 1.0);
        CHECK(gs.state.matrix()(1, 1).real() < 1e-21);
    }
    SUBCASE("commutes with its Hamiltonian") {
        for (int i = 0; i < 20; ++i) {
            const HermitianOperator h = random_hermitian(rng, 4, Units::energy, 2.0);
            const double beta = rng.uniform(0.2, 4.0);
            const GibbsState gs = gibbs_state(h, beta);
            CHECK(max_abs(gs.state.matrix() * h.matrix() - h.matrix() * gs.state.matrix()) <
                  1e-10);
        }
    }
    SUBCASE("bad beta") {
        CHECK_THROWS_AS(gibbs_state(HermitianOperator::zero(2, Units::energy), 0.0),
                        shape_error);
    }
}

TEST_CASE("minimizer sigma") {
    Rng rng(23);
    SUBCASE("G = 0 gives the maximally mixed state") {
        const DensityMatrix s = minimizer_sigma(HermitianOperator::zero(2, Units::dimensionless));
        CHECK(max_abs(s.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);
    }
    SUBCASE("diag(0, 10)") {
        RealVector g(2);
        g << 0.0, 10.0;
        const DensityMatrix s =
            minimizer_sigma(HermitianOperator::diagonal(g, Units::dimensionless));
        const double w = std::exp(-10.0) / (1.0 + std::exp(-10.0));
        CHECK(s.matrix()(0, 0).real() == doctest::Approx(1.0 - w).epsilon(1e-13));
        CHECK(s.matrix()(1, 1).real() == doctest::Approx(w).epsilon(1e-10));
        CHECK(s.matrix()(0, 0).real() == doctest::Approx(0.9999546).epsilon(1e-7));
    }
    SUBCASE("Legendre equality J(G) + S(sigma_G) = tr sigma_G G") {
        for (int i = 0; i < 30; ++i) {
            const HermitianOperator g = random_hermitian(rng, 5, Units::dimensionless, 2.0);
            const DensityMatrix s = minimizer_sigma(g);
            const double lhs = j_function(g) + von_neumann_entropy(s);
            const double rhs = (s.matrix() * g.matrix()).trace().real();
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("Legendre lower bound over random states") {
    Rng rng(29);
    for (int trials = 0; trials < 1000; ++trials) {
        const int d = 2 + rng.uniform_int(0, 6);  // dim <= 8
        const HermitianOperator g = random_hermitian(rng, d, Units::dimensionless, 2.0);
        const DensityMatrix rho = random_density(rng, d, 1 + rng.uniform_int(0, d - 1));
        const double slack = (rho.matrix() * g.matrix()).trace().real() -
                             von_neumann_entropy(rho) - j_function(g);
        CHECK(slack >= -1e-10);
    }
}

TEST_CASE("spectral decomposition") {
    Rng rng(31);
    const HermitianOperator h = random_hermitian(rng, 6, Units::energy, 3.0);
    const SpectralDecomposition sd = spectral(h);
    for (int i = 0; i + 1 < 6; ++i) CHECK(sd.eigenvalues(i) <= sd.eigenvalues(i + 1));
    const Matrix recon = sd.eigenvectors *
                         sd.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                         sd.eigenvectors.adjoint();
    CHECK(max_abs(recon - h.matrix()) < 1e-9);
    CHECK(max_abs(sd.eigenvectors.adjoint() * sd.eigenvectors - Matrix::Identity(6, 6)) <
          1e-12);
}

TEST_CASE("trace distance") {
    CHECK(trace_distance(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trace_distance(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)) ==
          0.0);
}
