// synthesis.cpp

#include "heatops/synthesis.hpp"

#include <cmath>

#include "heatops/random.hpp"

namespace heatops {

// ---------------------------------------------------------------------------
// Schedules and site thermals
// ---------------------------------------------------------------------------

double LevelSchedule::level(int i, double nu) const {
    if (i < 0 || i >= levels()) throw shape_error("LevelSchedule: level index out of range");
    if (i == 0) return 0.0;
    return base(i) + c * nu / (1.0 - nu);
}

RealVector LevelSchedule::levels_at(double nu) const {
    RealVector e(levels());
    for (int i = 0; i < levels(); ++i) e(i) = level(i, nu);
    return e;
}

SiteThermal site_thermal(const LevelSchedule& schedule, double nu, double beta) {
    SiteThermal site;
    site.energies = schedule.levels_at(nu);
    RealVector w(site.energies.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * site.energies(i));
    const double zeta = w.sum();  // >= 1 since the zeroth level sits at zero
    site.log_zeta = std::log(zeta);
    site.probs = w / zeta;
    site.entropy = von_neumann_entropy(site.probs);
    site.mean_energy = site.probs.dot(site.energies);
    return site;
}

double nu_value(int k, double s) {
    if (k < 1) throw shape_error("nu_value: chain sites are 1-based");
    if (!(s > 0.0)) throw shape_error("nu_value: scale must be positive");
    return (k - 1) / ((k - 1) + s);
}

namespace {

double cross_energy(const RealVector& probs, const RealVector& energies) {
    return probs.dot(energies);
}

SiteThermal x_site(const ChainRealization& chain, int k) {
    return site_thermal(chain.schedule_x, nu_value(k, chain.s), chain.beta);
}

SiteThermal y_site(const ChainRealization& chain, int k) {
    return site_thermal(chain.schedule_y, nu_value(k, chain.s), chain.beta);
}

// Orthonormal basis whose first column is `first`.
Matrix complete_basis(const Vector& first) {
    const int d = static_cast<int>(first.size());
    Matrix basis(d, d);
    basis.col(0) = first / first.norm();
    int filled = 1;
    for (int cand = 0; cand < d && filled < d; ++cand) {
        Vector v = Vector::Zero(d);
        v(cand) = 1.0;
        for (int j = 0; j < filled; ++j) v -= basis.col(j) * (basis.col(j).adjoint() * v)(0, 0);
        const double n = v.norm();
        if (n < 0.5 / std::sqrt(static_cast<double>(d))) continue;
        basis.col(filled++) = v / n;
    }
    if (filled != d) throw numeric_error("complete_basis: completion failed");
    return basis;
}

double rider_heat(double gap, double beta) { return gap * std::tanh(beta * gap / 2.0); }

} // namespace

// ---------------------------------------------------------------------------
// Chain builders
// ---------------------------------------------------------------------------

ChainRealization build_landauer_chain(const HermitianOperator& q, double beta,
                                      const Vector& psi0, int n, double s, double c) {
    const int d = q.dim();
    if (d < 2) throw shape_error("build_landauer_chain: use synthesize_landauer for d = 1");
    if (q.units() != Units::energy)
        throw shape_error("build_landauer_chain: target HTO must carry energy units");
    if (psi0.size() != d) throw shape_error("build_landauer_chain: psi0 dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw shape_error("build_landauer_chain: psi0 must be a unit vector");
    if (n < 2) throw shape_error("build_landauer_chain: chain length must be at least 2");
    if (!(c > 0.0)) throw shape_error("build_landauer_chain: divergence scale must be positive");

    const SpectralDecomposition sd = spectral(q);
    ChainRealization chain;
    chain.kind = ChainKind::landauer;
    chain.dim_a = d;
    chain.rank_y = 1;
    chain.schedule_x = {ScheduleKind::x_type,
                        (sd.eigenvalues.array() - sd.eigenvalues(0)).matrix(), c};
    chain.s = s;
    chain.n_x = n;
    chain.n_y = 0;
    chain.beta = beta;
    chain.target_q = q.matrix();
    chain.device_to_x = sd.eigenvectors;
    chain.out_basis = complete_basis(psi0);
    chain.rho0_probs = RealVector::Ones(1);
    chain.target_delta = j_function(q.scaled(beta).matrix()) / beta;
    chain.delta_achieved = chain_delta(chain);
    chain.eps_tail_x = 1.0 - x_site(chain, n).probs(0);
    chain.ln_z_b = chain_log_partition(chain);
    return chain;
}

ChainRealization build_complete_erasure_chain(const HermitianOperator& q, double beta,
                                              const DensityMatrix& rho0, int m, int n,
                                              double s, double c) {
    const int d = q.dim();
    if (q.units() != Units::energy)
        throw shape_error("build_complete_erasure_chain: target HTO must carry energy units");
    if (rho0.dim() != d) throw shape_error("build_complete_erasure_chain: ρ0 dimension mismatch");
    if (m < 1 || n < 2)
        throw shape_error("build_complete_erasure_chain: needs M >= 1 and N >= 2");
    if (!(c > 0.0)) throw shape_error("build_complete_erasure_chain: c must be positive");

    const SpectralDecomposition sq = spectral(q);
    const SpectralDecomposition s0 = spectral(rho0.matrix());

    ChainRealization chain;
    chain.kind = ChainKind::complete_erasure;
    chain.dim_a = d;
    chain.schedule_x = {ScheduleKind::x_type,
                       (sq.eigenvalues.array() - sq.eigenvalues(0)).matrix(), c};
    chain.s = s;
    chain.n_x = n;
    chain.n_y = m;
    chain.beta = beta;
    chain.target_q = q.matrix();
    chain.device_to_x = sq.eigenvectors;

    // ρ0 spectrum in descending order; levels beyond the rank are parked far
    // above the active band so their thermal weight is negligible but the
    // cycle keeps a uniform d-level alphabet.
    RealVector probs(d);
    Matrix alpha(d, d);
    for (int j = 0; j < d; ++j) {
        probs(j) = std::max(s0.eigenvalues(d - 1 - j), 0.0);
        alpha.col(j) = s0.eigenvectors.col(d - 1 - j);
    }
    int rank = 0;
    while (rank < d && probs(rank) > tol::rank_threshold) ++rank;
    if (rank == 0) throw invariant_error("build_complete_erasure_chain: ρ0 has no support");
    chain.rank_y = rank;
    chain.out_basis = alpha;
    chain.rho0_probs = probs;

    RealVector base_y(d);
    for (int j = 0; j < d; ++j)
        base_y(j) = (j < rank) ? std::log(probs(0) / probs(j)) / beta
                               : std::log(probs(0) / probs(rank - 1)) / beta +
                                     tol::pad_level_offset / beta;
    chain.schedule_y = {ScheduleKind::y_type, base_y, c};

    const double j_val = j_function(q.scaled(beta).matrix());
    const double s_val = von_neumann_entropy(chain.rho0_probs);
    chain.target_delta = (j_val + s_val) / beta;
    chain.delta_achieved = chain_delta(chain);
    chain.eps_tail_x = 1.0 - x_site(chain, n).probs(0);
    chain.eps_tail_y = 1.0 - y_site(chain, m).probs(0);
    chain.ln_z_b = chain_log_partition(chain);
    return chain;
}

// ---------------------------------------------------------------------------
// Δ accounting
// ---------------------------------------------------------------------------

double chain_delta(const ChainRealization& chain) {
    if (chain.is_rider()) return rider_heat(chain.rider_gap, chain.beta);

    const SpectralDecomposition sq = spectral(chain.target_q);
    const double q0 = sq.eigenvalues(0);
    SiteThermal prev = x_site(chain, 1);
    double delta = chain.target_delta - q0 - prev.mean_energy;
    for (int k = 2; k <= chain.n_x; ++k) {
        const SiteThermal cur = x_site(chain, k);
        delta += cross_energy(prev.probs, cur.energies) - cur.mean_energy;
        prev = cur;
    }
    if (chain.kind == ChainKind::complete_erasure) {
        SiteThermal ycur = y_site(chain, 1);
        for (int k = 1; k < chain.n_y; ++k) {
            const SiteThermal ynext = y_site(chain, k + 1);
            delta += cross_energy(ynext.probs, ycur.energies) - ycur.mean_energy;
            ycur = ynext;
        }
        // Closure: the last X-site's content wraps onto the outer Y-site.
        const SiteThermal ylast = y_site(chain, chain.n_y);
        delta += cross_energy(prev.probs, ylast.energies) - ylast.mean_energy;
    }
    return delta;
}

double chain_delta_relative_entropy_form(const ChainRealization& chain) {
    if (chain.is_rider()) return rider_heat(chain.rider_gap, chain.beta);

    double acc = 0.0;
    SiteThermal prev = x_site(chain, 1);
    for (int k = 2; k <= chain.n_x; ++k) {
        const SiteThermal cur = x_site(chain, k);
        acc += relative_entropy(prev.probs, cur.probs);
        prev = cur;
    }
    if (chain.kind == ChainKind::landauer) {
        acc -= prev.entropy;  // the wrapped site leaves the bath
    } else {
        SiteThermal ycur = y_site(chain, 1);
        const double s_first = ycur.entropy;
        for (int k = 1; k < chain.n_y; ++k) {
            const SiteThermal ynext = y_site(chain, k + 1);
            acc += relative_entropy(ynext.probs, ycur.probs);
            ycur = ynext;
        }
        acc += relative_entropy(prev.probs, ycur.probs);  // closure X_N → Y_M
        acc += von_neumann_entropy(chain.rho0_probs) - s_first;
    }
    return acc / chain.beta;
}

double chain_log_partition(const ChainRealization& chain) {
    if (chain.is_rider())
        return std::log(1.0 + std::exp(-chain.beta * chain.rider_gap));
    double acc = 0.0;
    for (int k = 1; k <= chain.n_x; ++k) acc += x_site(chain, k).log_zeta;
    for (int k = 1; k <= chain.n_y; ++k) acc += y_site(chain, k).log_zeta;
    return acc;
}

double structured_heat_accounting(const ChainRealization& chain, const DensityMatrix& rho) {
    if (rho.dim() != chain.dim_a)
        throw shape_error("structured_heat_accounting: state dimension mismatch");
    if (chain.is_rider()) return rider_heat(chain.rider_gap, chain.beta);

    // Device weights in the eigenbasis of the target HTO; they land on X_1.
    const Matrix rho_eig = chain.device_to_x.adjoint() * rho.matrix() * chain.device_to_x;
    RealVector device_probs(chain.dim_a);
    for (int i = 0; i < chain.dim_a; ++i) device_probs(i) = rho_eig(i, i).real();

    SiteThermal prev = x_site(chain, 1);
    double de = cross_energy(device_probs, prev.energies) - prev.mean_energy;
    for (int k = 2; k <= chain.n_x; ++k) {
        const SiteThermal cur = x_site(chain, k);
        de += cross_energy(prev.probs, cur.energies) - cur.mean_energy;
        prev = cur;
    }
    if (chain.kind == ChainKind::complete_erasure) {
        SiteThermal ycur = y_site(chain, 1);
        for (int k = 1; k < chain.n_y; ++k) {
            const SiteThermal ynext = y_site(chain, k + 1);
            de += cross_energy(ynext.probs, ycur.energies) - ycur.mean_energy;
            ycur = ynext;
        }
        const SiteThermal ylast = y_site(chain, chain.n_y);
        de += cross_energy(prev.probs, ylast.energies) - ylast.mean_energy;
    }
    return de;
}

HermitianOperator achieved_hto(const ChainRealization& chain) {
    const int d = chain.dim_a;
    const Matrix q = chain.target_q +
                     (chain.delta_achieved - chain.target_delta) * Matrix::Identity(d, d);
    return {q, Units::energy};
}

DensityMatrix chain_output_state(const ChainRealization& chain) {
    if (chain.is_rider()) return DensityMatrix::maximally_mixed(1);
    RealVector w;
    if (chain.kind == ChainKind::landauer)
        w = x_site(chain, chain.n_x).probs;
    else
        w = y_site(chain, 1).probs;
    const Matrix out = chain.out_basis * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                       chain.out_basis.adjoint();
    return DensityMatrix(hermitize(out));
}

DensityMatrix ideal_output_state(const ChainRealization& chain) {
    if (chain.is_rider()) return DensityMatrix::maximally_mixed(1);
    if (chain.kind == ChainKind::landauer)
        return DensityMatrix::pure(chain.out_basis.col(0));
    RealVector w = RealVector::Zero(chain.dim_a);
    w.head(chain.rho0_probs.size()) = chain.rho0_probs;
    const Matrix out = chain.out_basis * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                       chain.out_basis.adjoint();
    return DensityMatrix(hermitize(out));
}

double chain_channel_error(const ChainRealization& chain) {
    return trace_distance(chain_output_state(chain), ideal_output_state(chain));
}

// ---------------------------------------------------------------------------
// Synthesis with Δ bisection
// ---------------------------------------------------------------------------

namespace {

template <typename BuildFn>
ChainRealization tune_delta(const BuildFn& build, double target) {
    // Geometric bracket: small s gives coarse increments (Δ large), large s
    // fine ones (Δ small). Bisect on ln s.
    double s_coarse = 1.0;
    int guard = 0;
    while (chain_delta(build(s_coarse)) <= target) {
        s_coarse *= 0.25;
        if (++guard > 500 || s_coarse < 1e-300)
            throw numeric_error("synthesize: Δ upper bracket not found");
    }
    double s_fine = 1.0;
    guard = 0;
    while (chain_delta(build(s_fine)) >= target) {
        s_fine *= 4.0;
        if (++guard > 500 || s_fine > 1e300)
            throw truncation_error(
                "synthesize: Δ range insufficient at the given chain length; increase N");
    }
    double lo = s_coarse, hi = s_fine;  // Δ(lo) > target > Δ(hi)
    ChainRealization best = build(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = std::sqrt(lo * hi);
        ChainRealization candidate = build(mid);
        const double f = chain_delta(candidate) - target;
        if (std::abs(f) < std::abs(best.delta_achieved - target)) best = candidate;
        if (std::abs(f) <= tol::delta_target / 4.0) break;
        (f > 0.0 ? lo : hi) = mid;
        if (hi / lo < 1.0 + 1e-15) break;
    }
    best.delta_achieved = chain_delta(best);
    if (std::abs(best.delta_achieved - target) > tol::delta_target)
        throw numeric_error("synthesize: Δ bisection stalled at residual " +
                            std::to_string(best.delta_achieved - target));
    return best;
}

ChainRealization rider_chain(double alpha, double beta, double c) {
    ChainRealization chain;
    chain.kind = ChainKind::landauer;
    chain.dim_a = 1;
    chain.rank_y = 1;
    chain.schedule_x = {ScheduleKind::x_type, RealVector::Zero(1), c};
    chain.s = 0.0;
    chain.n_x = 0;
    chain.n_y = 0;
    chain.target_q = Matrix::Constant(1, 1, alpha);
    chain.device_to_x = Matrix::Identity(1, 1);
    chain.out_basis = Matrix::Identity(1, 1);
    chain.rho0_probs = RealVector::Ones(1);
    chain.rider_gap = rider_gap(alpha, beta);
    chain.beta = beta;
    chain.target_delta = alpha;
    chain.delta_achieved = rider_heat(chain.rider_gap, beta);
    chain.ln_z_b = chain_log_partition(chain);
    return chain;
}

} // namespace

ChainRealization synthesize_landauer(const HermitianOperator& q, double beta,
                                     const Vector& psi0, int n, double tail_bound,
                                     double c) {
    if (!(beta > 0.0)) throw shape_error("synthesize_landauer: beta must be positive");
    const double j = j_function(q.scaled(beta).matrix());
    if (!(j > 0.0))
        throw inadmissible_error("synthesize_landauer: J(βQ) = " + std::to_string(j) +
                                 " must be strictly positive (tr e^{-βQ} < 1)");
    if (q.dim() == 1) {
        // Degenerate one-level device: the shift chain carries no content, so
        // the constant heat is dumped by a single flipped two-level site.
        return rider_chain(q.matrix()(0, 0).real(), beta, c);
    }
    if (n < 2) throw shape_error("synthesize_landauer: chain length must be at least 2");

    auto build = [&](double s) { return build_landauer_chain(q, beta, psi0, n, s, c); };
    ChainRealization chain = tune_delta(build, j / beta);
    if (chain.eps_tail_x > tail_bound)
        throw truncation_error("synthesize_landauer: tail weight " +
                               std::to_string(chain.eps_tail_x) +
                               " exceeds the bound at N = " + std::to_string(n) +
                               "; increase N");
    return chain;
}

ChainRealization synthesize_complete_erasure(const HermitianOperator& q, double beta,
                                             const DensityMatrix& rho0, int m, int n,
                                             double tail_bound, double c) {
    if (!(beta > 0.0)) throw shape_error("synthesize_complete_erasure: beta must be positive");
    const double j = j_function(q.scaled(beta).matrix());
    const SpectralDecomposition s0 = spectral(rho0.matrix());
    const double entropy0 = von_neumann_entropy(s0.eigenvalues.cwiseMax(0.0));
    if (!(j + entropy0 > 0.0))
        throw inadmissible_error(
            "synthesize_complete_erasure: J(βQ) + S(ρ0) = " + std::to_string(j + entropy0) +
            " must be strictly positive; the equality case needs swap_equality_case");

    auto build = [&](double s) {
        return build_complete_erasure_chain(q, beta, rho0, m, n, s, c);
    };
    ChainRealization chain = tune_delta(build, (j + entropy0) / beta);
    if (chain.eps_tail_x > tail_bound || chain.eps_tail_y > tail_bound)
        throw truncation_error("synthesize_complete_erasure: tail weights (" +
                               std::to_string(chain.eps_tail_x) + ", " +
                               std::to_string(chain.eps_tail_y) +
                               ") exceed the bound; increase M, N");
    return chain;
}

// ---------------------------------------------------------------------------
// Equality case (swap construction)
// ---------------------------------------------------------------------------

DenseRealization swap_equality_case(const DensityMatrix& rho0, const Matrix& w, double beta) {
    const int d = rho0.dim();
    if (w.rows() != d || w.cols() != d)
        throw shape_error("swap_equality_case: W must be a unitary on the device");
    if (max_abs(w.adjoint() * w - Matrix::Identity(d, d)) > tol::isometry_defect)
        throw invariant_error("swap_equality_case: W is not unitary");
    const SpectralDecomposition sd = spectral(rho0.matrix());
    if (sd.eigenvalues.minCoeff() <= tol::rank_threshold)
        throw inadmissible_error(
            "swap_equality_case: ρ0 must be full rank (σ_βQ isospectral with ρ0)");

    // Bath: a copy of the device with H_B = -(1/β) ln ρ0, whose thermal state
    // is exactly ρ0 (ln Z_B = 0).
    RealVector energies(d);
    for (int i = 0; i < d; ++i) energies(i) = -std::log(sd.eigenvalues(i)) / beta;
    const Matrix h_b = sd.eigenvectors *
                       energies.asDiagonal().toDenseMatrix().cast<Complex>() *
                       sd.eigenvectors.adjoint();

    Matrix swap = Matrix::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) swap(static_cast<long>(b) * d + a, static_cast<long>(a) * d + b) = 1.0;
    const Matrix v = swap * kron(w, Matrix::Identity(d, d));
    return {d, HermitianOperator(hermitize(h_b), Units::energy), beta, Isometry(v)};
}

// ---------------------------------------------------------------------------
// Dense materialization and the oracle check
// ---------------------------------------------------------------------------

DenseRealization dense_realization(const ChainRealization& chain) {
    const int d = chain.dim_a;
    const double beta = chain.beta;
    if (chain.is_rider()) {
        RealVector levels(2);
        levels << 0.0, chain.rider_gap;
        Matrix flip(2, 2);
        flip << 0, 1, 1, 0;
        return {1, HermitianOperator::diagonal(levels, Units::energy), beta, Isometry(flip)};
    }

    const int sites = chain.n_y + chain.n_x;
    long bath_dim = 1;
    for (int k = 0; k < sites; ++k) {
        bath_dim *= d;
        if (bath_dim * d > tol::dense_chain_cap)
            throw resource_error("dense_realization: total dimension exceeds 2^12");
    }
    const long joint = bath_dim * d;

    // Site order inside the bath: Y_1..Y_M then X_1..X_N, most significant
    // first. Site k has ν_k from its own chain position.
    std::vector<const LevelSchedule*> sched(sites);
    std::vector<double> nus(sites);
    for (int k = 0; k < chain.n_y; ++k) {
        sched[k] = &chain.schedule_y;
        nus[k] = nu_value(k + 1, chain.s);
    }
    for (int k = 0; k < chain.n_x; ++k) {
        sched[chain.n_y + k] = &chain.schedule_x;
        nus[chain.n_y + k] = nu_value(k + 1, chain.s);
    }

    RealVector bath_energies = RealVector::Zero(bath_dim);
    std::vector<int> digits(sites, 0);
    for (long flat = 0; flat < bath_dim; ++flat) {
        double e = 0.0;
        for (int k = 0; k < sites; ++k) e += sched[k]->level(digits[k], nus[k]);
        bath_energies(flat) = e;
        for (int k = sites - 1; k >= 0; --k) {
            if (++digits[k] < d) break;
            digits[k] = 0;
        }
    }

    // Shift isometry, built column by column:
    //   V |a>|digits> = Σ_m conj(U_q(a,m)) |out_basis col(dev)> |shifted digits(m)>.
    Matrix v = Matrix::Zero(joint, joint);
    std::fill(digits.begin(), digits.end(), 0);
    std::vector<int> out_digits(sites, 0);
    for (long bflat = 0; bflat < bath_dim; ++bflat) {
        const int m_count = chain.n_y, n_count = chain.n_x;
        int dev_digit;
        if (chain.kind == ChainKind::landauer) {
            dev_digit = digits[n_count - 1];  // X_N wraps to the device
            for (int k = 1; k < n_count; ++k) out_digits[k] = digits[k - 1];
        } else {
            dev_digit = digits[0];  // Y_1 feeds the device
            for (int k = 0; k + 1 < m_count; ++k) out_digits[k] = digits[k + 1];
            out_digits[m_count - 1] = digits[sites - 1];  // closure X_N → Y_M
            for (int k = 1; k < n_count; ++k) out_digits[m_count + k] = digits[m_count + k - 1];
        }
        for (int m = 0; m < d; ++m) {
            out_digits[m_count] = m;  // device content lands on X_1
            long out_flat = 0;
            for (int k = 0; k < sites; ++k) out_flat = out_flat * d + out_digits[k];
            for (int a = 0; a < d; ++a) {
                const Complex amp = std::conj(chain.device_to_x(a, m));
                if (amp == Complex(0.0, 0.0)) continue;
                for (int a_out = 0; a_out < d; ++a_out) {
                    const Complex w = chain.out_basis(a_out, dev_digit);
                    if (w == Complex(0.0, 0.0)) continue;
                    v(static_cast<long>(a_out) * bath_dim + out_flat,
                      static_cast<long>(a) * bath_dim + bflat) += amp * w;
                }
            }
        }
        for (int k = sites - 1; k >= 0; --k) {
            if (++digits[k] < d) break;
            digits[k] = 0;
        }
    }

    return {d, HermitianOperator::diagonal(bath_energies, Units::energy), beta,
            Isometry(std::move(v))};
}

OracleReport dense_oracle_check(const ChainRealization& chain, int samples,
                                std::uint64_t seed) {
    const DenseRealization dense = dense_realization(chain);
    const HeatReport report = compute_hto(dense);
    const HermitianOperator structured_q = achieved_hto(chain);

    OracleReport out{};
    out.hto_mismatch = max_abs(report.hto.matrix() - structured_q.matrix());

    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const DensityMatrix rho = random_density(rng, chain.dim_a);
        const double structured = structured_heat_accounting(chain, rho);
        const double densely = average_heat(report, rho);
        worst = std::max(worst, std::abs(structured - densely));
    }
    out.max_heat_mismatch = worst;

    const KrausChannel ideal =
        KrausChannel::complete_erasure(ideal_output_state(chain), chain.dim_a);
    out.channel_error_dense = channel_distance(report.channel, ideal, 32, seed + 1);
    out.channel_error_bound =
        chain.dim_a * std::max({chain.eps_tail_x, chain.eps_tail_y, 1e-300});
    out.delta_form_mismatch =
        std::abs(chain_delta(chain) - chain_delta_relative_entropy_form(chain));
    return out;
}

// ---------------------------------------------------------------------------
// Minimal-heat erasure design
// ---------------------------------------------------------------------------

std::pair<HermitianOperator, ChainRealization> design_min_heat_erasure(
    const DensityMatrix& rho_avg, double beta, double epsilon, int n, double tail_bound) {
    if (!(epsilon > 0.0))
        throw inadmissible_error(
            "design_min_heat_erasure: ε must be strictly positive (a finite bath needs "
            "tr e^{-βQ} = e^{-βε} < 1)");
    const SpectralDecomposition sd = spectral(rho_avg.matrix());
    if (sd.eigenvalues.minCoeff() <= tol::rank_threshold)
        throw inadmissible_error(
            "design_min_heat_erasure: ρ_avg must be full rank; regularize it first");
    RealVector energies(rho_avg.dim());
    for (int i = 0; i < rho_avg.dim(); ++i)
        energies(i) = -std::log(sd.eigenvalues(i)) / beta + epsilon;
    const Matrix q = sd.eigenvectors *
                     energies.asDiagonal().toDenseMatrix().cast<Complex>() *
                     sd.eigenvectors.adjoint();
    HermitianOperator hto(hermitize(q), Units::energy);
    Vector psi0 = Vector::Zero(rho_avg.dim());
    psi0(0) = 1.0;
    ChainRealization chain = synthesize_landauer(hto, beta, psi0, n, tail_bound);
    return {std::move(hto), std::move(chain)};
}

// ---------------------------------------------------------------------------
// Rectangular truncated shift
// ---------------------------------------------------------------------------

ShiftRealization truncated_shift_realization(const Matrix& q, double beta, int sites,
                                             double c) {
    const int n = static_cast<int>(q.rows());
    if (q.cols() != n || n < 1) throw shape_error("truncated_shift_realization: q must be square");
    if (sites < 1) throw shape_error("truncated_shift_realization: needs at least one site");
    const HermitianOperator q_op(q, Units::energy);
    const double j = j_function(q_op.scaled(beta).matrix());
    if (!(j > 0.0))
        throw inadmissible_error("truncated_shift_realization: J(βq) = " + std::to_string(j) +
                                 " must be strictly positive");

    const SpectralDecomposition sd = spectral(q);
    const LevelSchedule schedule{ScheduleKind::x_type,
                                 (sd.eigenvalues.array() - sd.eigenvalues(0)).matrix(), c};
    const double q0 = sd.eigenvalues(0);
    const double target = j / beta;

    // Δ_rect(s): the bath gains a site, so each σ_k is re-billed at the next
    // schedule point. Decreasing towards J/β - q0 < J/β as s → ∞ (q0 > 0
    // whenever tr e^{-βq} < 1).
    auto delta_at = [&](double s) {
        double delta = target - q0;
        for (int k = 1; k <= sites; ++k) {
            const SiteThermal cur = site_thermal(schedule, nu_value(k, s), beta);
            const RealVector next_levels = schedule.levels_at(nu_value(k + 1, s));
            delta += cur.probs.dot(next_levels) - cur.mean_energy;
        }
        return delta;
    };

    double lo = 1.0;
    int guard = 0;
    while (delta_at(lo) <= target) {
        lo *= 0.25;
        if (++guard > 500) throw numeric_error("truncated_shift_realization: no upper bracket");
    }
    double hi = 1.0;
    guard = 0;
    while (delta_at(hi) >= target) {
        hi *= 4.0;
        if (++guard > 500) throw numeric_error("truncated_shift_realization: no lower bracket");
    }
    double s_star = std::sqrt(lo * hi);
    for (int it = 0; it < 400; ++it) {
        s_star = std::sqrt(lo * hi);
        const double f = delta_at(s_star) - target;
        if (std::abs(f) <= tol::delta_target / 4.0) break;
        (f > 0.0 ? lo : hi) = s_star;
        if (hi / lo < 1.0 + 1e-15) break;
    }
    const double delta = delta_at(s_star);
    if (std::abs(delta - target) > tol::delta_target)
        throw numeric_error("truncated_shift_realization: Δ bisection stalled");

    long dim_in = 1;
    for (int k = 0; k < sites; ++k) dim_in *= n;
    const long dim_out = dim_in * n;
    if (static_cast<long>(n) * dim_out > tol::dense_chain_cap)
        throw resource_error("truncated_shift_realization: chain too large");

    // Couplers L_i = Σ_m conj(U_q(i,m)) · (prepend level m); exact isometries
    // onto orthogonal subspaces.
    std::vector<Matrix> couplers;
    couplers.reserve(n);
    for (int i = 0; i < n; ++i) {
        Matrix l = Matrix::Zero(dim_out, dim_in);
        for (int m = 0; m < n; ++m) {
            const Complex amp = std::conj(sd.eigenvectors(i, m));
            for (long x = 0; x < dim_in; ++x) l(static_cast<long>(m) * dim_in + x, x) += amp;
        }
        couplers.push_back(std::move(l));
    }

    // W = Σ_i |0><i| ⊗ L_i realizes a Landauer erasure on the n-level device.
    Matrix w = Matrix::Zero(static_cast<long>(n) * dim_out, static_cast<long>(n) * dim_in);
    for (int i = 0; i < n; ++i)
        w.block(0, static_cast<long>(i) * dim_in, dim_out, dim_in) = couplers[i];

    auto chain_energies = [&](int count, int offset) {
        long dim = 1;
        for (int k = 0; k < count; ++k) dim *= n;
        RealVector e = RealVector::Zero(dim);
        std::vector<int> digits(count, 0);
        for (long flat = 0; flat < dim; ++flat) {
            double acc = 0.0;
            for (int k = 0; k < count; ++k)
                acc += schedule.level(digits[k], nu_value(k + 1 + offset, s_star));
            e(flat) = acc;
            for (int k = count - 1; k >= 0; --k) {
                if (++digits[k] < n) break;
                digits[k] = 0;
            }
        }
        return e;
    };
    // Input sites carry ν_1..ν_K; on output everything shifts one slot right,
    // so the output chain carries ν_1..ν_{K+1} with the new site at ν_1.
    const HermitianOperator h_in =
        HermitianOperator::diagonal(chain_energies(sites, 0), Units::energy);
    const HermitianOperator h_out =
        HermitianOperator::diagonal(chain_energies(sites + 1, 0), Units::energy);

    return {DenseRealization(n, h_in, h_out, beta, Isometry(std::move(w))), std::move(couplers),
            delta, j};
}

} // namespace heatops
