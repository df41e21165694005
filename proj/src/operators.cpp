// operators.cpp

#include "heatops/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace heatops {

namespace {

void check_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw shape_error(std::string(what) + ": matrix must be square and nonempty");
}

void check_entry_cap(long rows, long cols, const char* what) {
    if (rows * cols > tol::max_matrix_entries)
        throw resource_error(std::string(what) + ": matrix of " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " entries exceeds the dense cap");
}

} // namespace

// ---------------------------------------------------------------------------
// HermitianOperator
// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix entries, Units units)
    : entries_(std::move(entries)), units_(units) {
    check_square(entries_, "HermitianOperator");
    const double defect = max_abs(entries_ - entries_.adjoint());
    if (defect > tol::hermiticity)
        throw invariant_error("HermitianOperator: hermiticity defect " + std::to_string(defect) +
                              " exceeds tolerance");
    entries_ = hermitize(entries_);
}

HermitianOperator HermitianOperator::identity(int dim, Units units) {
    return {Matrix::Identity(dim, dim), units};
}

HermitianOperator HermitianOperator::zero(int dim, Units units) {
    return {Matrix::Zero(dim, dim), units};
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag, Units units) {
    Matrix m = Matrix::Zero(diag.size(), diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
    return {std::move(m), units};
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    check_square(entries_, "DensityMatrix");
    const double defect = max_abs(entries_ - entries_.adjoint());
    if (defect > tol::hermiticity)
        throw invariant_error("DensityMatrix: hermiticity defect " + std::to_string(defect));
    entries_ = hermitize(entries_);
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > tol::state_trace)
        throw invariant_error("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_error("DensityMatrix: eigensolver failed");
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < tol::state_min_eig)
        throw invariant_error("DensityMatrix: smallest eigenvalue " + std::to_string(min_eig) +
                              " is negative beyond tolerance");
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double n = psi.norm();
    if (n <= 0.0) throw shape_error("DensityMatrix::pure: zero vector");
    Vector v = psi / n;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int i) {
    if (i < 0 || i >= dim) throw shape_error("DensityMatrix::basis_state: index out of range");
    Vector v = Vector::Zero(dim);
    v(i) = 1.0;
    return pure(v);
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probs) {
    Matrix m = Matrix::Zero(probs.size(), probs.size());
    for (Eigen::Index i = 0; i < probs.size(); ++i) m(i, i) = probs(i);
    return DensityMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Isometry
// ---------------------------------------------------------------------------

Isometry::Isometry(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < entries_.cols() || entries_.cols() < 1)
        throw shape_error("Isometry: requires dim_out >= dim_in >= 1");
    const Matrix gram = entries_.adjoint() * entries_;
    const double defect = max_abs(gram - Matrix::Identity(entries_.cols(), entries_.cols()));
    if (defect > tol::isometry_defect)
        throw invariant_error("Isometry: max |V†V - 1| = " + std::to_string(defect) +
                              " exceeds tolerance");
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

SpectralDecomposition spectral(const Matrix& m) {
    check_square(m, "spectral");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
    if (es.info() != Eigen::Success) throw numeric_error("spectral: eigensolver failed");
    SpectralDecomposition sd{es.eigenvalues(), es.eigenvectors()};
    const Matrix recon =
        sd.eigenvectors * sd.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
        sd.eigenvectors.adjoint();
    if (max_abs(recon - hermitize(m)) > tol::spectral_recon)
        throw numeric_error("spectral: reconstruction error exceeds tolerance");
    return sd;
}

// ---------------------------------------------------------------------------
// Tensor algebra
// ---------------------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
    check_entry_cap(a.rows() * b.rows(), a.cols() * b.cols(), "kron");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.units() != b.units())
        throw shape_error("tensor: operands must share the same units category");
    return {kron(a.matrix(), b.matrix()), a.units()};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
    check_square(m, "partial_trace");
    long total = 1;
    for (int d : dims) {
        if (d < 1) throw shape_error("partial_trace: subsystem dims must be positive");
        total *= d;
    }
    if (total != m.rows())
        throw shape_error("partial_trace: product of dims does not match matrix dimension");

    const int n = static_cast<int>(dims.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw shape_error("partial_trace: keep index out of range");
        kept[k] = true;
    }

    // Row-major strides: leftmost subsystem is most significant.
    std::vector<long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    std::vector<int> kept_idx, traced_idx;
    for (int i = 0; i < n; ++i) (kept[i] ? kept_idx : traced_idx).push_back(i);

    long keep_dim = 1, trace_dim = 1;
    for (int i : kept_idx) keep_dim *= dims[i];
    for (int i : traced_idx) trace_dim *= dims[i];
    check_entry_cap(keep_dim, keep_dim, "partial_trace");

    // Flat offset of a multi-index over a subsystem subset.
    auto offsets = [&](const std::vector<int>& subsys) {
        std::vector<long> out;
        long count = 1;
        for (int i : subsys) count *= dims[i];
        out.reserve(count);
        std::vector<int> idx(subsys.size(), 0);
        for (long c = 0; c < count; ++c) {
            long off = 0;
            for (size_t j = 0; j < subsys.size(); ++j) off += idx[j] * stride[subsys[j]];
            out.push_back(off);
            for (int j = static_cast<int>(subsys.size()) - 1; j >= 0; --j) {
                if (++idx[j] < dims[subsys[j]]) break;
                idx[j] = 0;
            }
        }
        return out;
    };

    const std::vector<long> keep_off = offsets(kept_idx);
    const std::vector<long> trace_off = offsets(traced_idx);

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (long r = 0; r < keep_dim; ++r)
        for (long c = 0; c < keep_dim; ++c) {
            Complex sum = 0.0;
            for (long t : trace_off) sum += m(keep_off[r] + t, keep_off[c] + t);
            out(r, c) = sum;
        }
    return out;
}

Matrix partial_trace_second(const Matrix& m, int dim_a, int dim_b) {
    return partial_trace(m, {dim_a, dim_b}, {0});
}

Matrix partial_trace_first(const Matrix& m, int dim_a, int dim_b) {
    return partial_trace(m, {dim_a, dim_b}, {1});
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

double von_neumann_entropy(const RealVector& probs) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i)
        if (probs(i) > tol::entropy_floor) s -= probs(i) * std::log(probs(i));
    return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("entropy: eigensolver failed");
    return von_neumann_entropy(es.eigenvalues());
}

double relative_entropy(const RealVector& sigma_probs, const RealVector& rho_probs) {
    if (sigma_probs.size() != rho_probs.size())
        throw shape_error("relative_entropy: dimension mismatch");
    double overlap = 0.0, value = 0.0;
    for (Eigen::Index i = 0; i < sigma_probs.size(); ++i) {
        const double s = sigma_probs(i), r = rho_probs(i);
        if (r <= tol::entropy_floor) {
            overlap += std::max(s, 0.0);
            continue;
        }
        if (s > tol::entropy_floor) value += s * (std::log(s) - std::log(r));
    }
    if (overlap > tol::support_overlap) return std::numeric_limits<double>::infinity();
    return std::max(value, 0.0);
}

double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho) {
    if (sigma.dim() != rho.dim()) throw shape_error("relative_entropy: dimension mismatch");
    const SpectralDecomposition sr = spectral(rho.matrix());

    // Weights of sigma in rho's eigenbasis; kernel overlap decides finiteness.
    double overlap = 0.0, cross = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        const Vector v = sr.eigenvectors.col(i);
        const double w = std::max((v.adjoint() * sigma.matrix() * v)(0, 0).real(), 0.0);
        if (sr.eigenvalues(i) <= tol::entropy_floor)
            overlap += w;
        else
            cross += w * std::log(sr.eigenvalues(i));
    }
    if (overlap > tol::support_overlap) return std::numeric_limits<double>::infinity();
    const double value = -von_neumann_entropy(sigma) - cross;
    return std::max(value, 0.0);
}

// ---------------------------------------------------------------------------
// J-function and thermal states
// ---------------------------------------------------------------------------

double j_function(const RealVector& eigenvalues) {
    // J = -ln Σ e^{-g_i}, stabilized around the smallest eigenvalue.
    const double m = eigenvalues.minCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) acc += std::exp(m - eigenvalues(i));
    return m - std::log(acc);
}

double j_function(const Matrix& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(g), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("j_function: eigensolver failed");
    return j_function(es.eigenvalues());
}

double j_function(const HermitianOperator& g) {
    if (g.units() != Units::dimensionless)
        throw shape_error("j_function: expects a dimensionless operator (pass βQ, not Q)");
    return j_function(g.matrix());
}

GibbsState gibbs_state(const HermitianOperator& h, double beta) {
    if (h.units() != Units::energy)
        throw shape_error("gibbs_state: Hamiltonian must carry energy units");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw shape_error("gibbs_state: beta must be finite and positive");
    const SpectralDecomposition sd = spectral(h.matrix());
    const double e_min = sd.eigenvalues.minCoeff();
    RealVector w(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = std::exp(-beta * (sd.eigenvalues(i) - e_min));
    const double z_shifted = w.sum();
    w /= z_shifted;
    const Matrix rho = sd.eigenvectors * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                       sd.eigenvectors.adjoint();
    return {DensityMatrix(hermitize(rho)), std::log(z_shifted) - beta * e_min};
}

DensityMatrix minimizer_sigma(const Matrix& g) {
    const SpectralDecomposition sd = spectral(g);
    const double m = sd.eigenvalues.minCoeff();
    RealVector w(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(m - sd.eigenvalues(i));
    w /= w.sum();
    const Matrix rho = sd.eigenvectors * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                       sd.eigenvectors.adjoint();
    return DensityMatrix(hermitize(rho));
}

DensityMatrix minimizer_sigma(const HermitianOperator& g) {
    if (g.units() != Units::dimensionless)
        throw shape_error("minimizer_sigma: expects a dimensionless operator");
    return minimizer_sigma(g.matrix());
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

double trace_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw shape_error("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("trace_distance: eigensolver failed");
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace heatops
