// channels.cpp

#include "heatops/channels.hpp"

#include <cmath>

#include "heatops/random.hpp"

namespace heatops {

namespace {

// Column-stacked (input-major) vectorization matching the Choi index order.
Vector vec_op(const Matrix& m) {
    Vector v(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        for (Eigen::Index a = 0; a < m.rows(); ++a) v(i * m.rows() + a) = m(a, i);
    return v;
}

Matrix unvec_op(const Vector& v, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < cols; ++i)
        for (int a = 0; a < rows; ++a) m(a, i) = v(i * rows + a);
    return m;
}

// Smallest/largest singular values of the matrix whose columns are vec(ops).
// More columns than rows means dependence regardless of the spectrum.
std::pair<double, double> stacked_sv_range(const std::vector<Matrix>& ops) {
    Matrix stack(ops.front().size(), static_cast<Eigen::Index>(ops.size()));
    for (size_t k = 0; k < ops.size(); ++k) stack.col(static_cast<Eigen::Index>(k)) = vec_op(ops[k]);
    Eigen::JacobiSVD<Matrix> svd(stack);
    const auto& sv = svd.singularValues();
    const double sv_min = stack.cols() > stack.rows() ? 0.0 : sv(sv.size() - 1);
    return {sv_min, sv(0)};
}

} // namespace

// ---------------------------------------------------------------------------
// KrausChannel
// ---------------------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops, bool minimal)
    : ops_(std::move(kraus_ops)), minimal_(minimal) {
    if (ops_.empty()) throw shape_error("KrausChannel: needs at least one Kraus operator");
    dim_out_ = static_cast<int>(ops_.front().rows());
    dim_in_ = static_cast<int>(ops_.front().cols());
    if (dim_in_ < 1 || dim_out_ < 1) throw shape_error("KrausChannel: empty operator");
    Matrix gram = Matrix::Zero(dim_in_, dim_in_);
    for (const Matrix& m : ops_) {
        if (m.rows() != dim_out_ || m.cols() != dim_in_)
            throw shape_error("KrausChannel: inconsistent Kraus operator shapes");
        gram += m.adjoint() * m;
    }
    const double defect = max_abs(gram - Matrix::Identity(dim_in_, dim_in_));
    if (defect > tol::kraus_tp)
        throw invariant_error("KrausChannel: trace preservation defect " + std::to_string(defect));
    if (minimal_) {
        const auto [sv_min, sv_max] = stacked_sv_range(ops_);
        if (sv_min <= tol::kraus_independent * sv_max)
            throw invariant_error("KrausChannel: operators flagged minimal are not independent");
    }
}

KrausChannel KrausChannel::identity(int dim) {
    return KrausChannel({Matrix::Identity(dim, dim)}, true);
}

KrausChannel KrausChannel::unitary(const Matrix& u) {
    if (max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())) > tol::isometry_defect)
        throw invariant_error("KrausChannel::unitary: operator is not an isometry");
    return KrausChannel({u}, true);
}

KrausChannel KrausChannel::complete_erasure(const DensityMatrix& rho0, int dim_in) {
    if (dim_in <= 0) dim_in = rho0.dim();
    const SpectralDecomposition sd = spectral(rho0.matrix());
    std::vector<Matrix> ops;
    for (int b = 0; b < rho0.dim(); ++b) {
        const double p = sd.eigenvalues(b);
        if (p <= tol::entropy_floor) continue;
        for (int i = 0; i < dim_in; ++i) {
            Matrix m = Matrix::Zero(rho0.dim(), dim_in);
            m.col(i) = std::sqrt(p) * sd.eigenvectors.col(b);
            ops.push_back(std::move(m));
        }
    }
    return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

Matrix apply_raw(const KrausChannel& channel, const Matrix& m) {
    if (m.rows() != channel.dim_in() || m.cols() != channel.dim_in())
        throw shape_error("apply: dimension mismatch");
    Matrix out = Matrix::Zero(channel.dim_out(), channel.dim_out());
    for (const Matrix& k : channel.kraus()) out += k * m * k.adjoint();
    return out;
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
    return DensityMatrix(hermitize(apply_raw(channel, rho.matrix())));
}

Matrix apply_adjoint(const KrausChannel& channel, const Matrix& x) {
    if (x.rows() != channel.dim_out() || x.cols() != channel.dim_out())
        throw shape_error("apply_adjoint: dimension mismatch");
    Matrix out = Matrix::Zero(channel.dim_in(), channel.dim_in());
    for (const Matrix& k : channel.kraus()) out += k.adjoint() * x * k;
    return out;
}

// ---------------------------------------------------------------------------
// Choi form
// ---------------------------------------------------------------------------

ChoiMatrix::ChoiMatrix(Matrix m, int dim_in, int dim_out)
    : m_(std::move(m)), dim_in_(dim_in), dim_out_(dim_out) {
    const long d = static_cast<long>(dim_in_) * dim_out_;
    if (m_.rows() != d || m_.cols() != d) throw shape_error("ChoiMatrix: size mismatch");
    if (max_abs(m_ - m_.adjoint()) > tol::hermiticity)
        throw invariant_error("ChoiMatrix: not hermitian");
    m_ = hermitize(m_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::choi_psd)
        throw invariant_error("ChoiMatrix: not positive semidefinite, min eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()));
    const Matrix marginal = partial_trace(m_, {dim_in_, dim_out_}, {0});
    if (max_abs(marginal - Matrix::Identity(dim_in_, dim_in_)) > tol::choi_tp)
        throw invariant_error("ChoiMatrix: output marginal is not the input identity");
}

ChoiMatrix to_choi(const KrausChannel& channel) {
    const long d = static_cast<long>(channel.dim_in()) * channel.dim_out();
    Matrix c = Matrix::Zero(d, d);
    for (const Matrix& m : channel.kraus()) {
        const Vector v = vec_op(m);
        c += v * v.adjoint();
    }
    return ChoiMatrix(std::move(c), channel.dim_in(), channel.dim_out());
}

namespace {
std::pair<std::vector<Matrix>, int> choi_kraus(const ChoiMatrix& choi) {
    const SpectralDecomposition sd = spectral(choi.matrix());
    const double cut = tol::choi_rank_cut * sd.eigenvalues.cwiseAbs().maxCoeff();
    std::vector<Matrix> ops;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        if (sd.eigenvalues(i) <= cut) continue;
        ops.push_back(unvec_op(std::sqrt(sd.eigenvalues(i)) * sd.eigenvectors.col(i),
                               choi.dim_out(), choi.dim_in()));
    }
    return {std::move(ops), static_cast<int>(ops.size())};
}
} // namespace

KrausChannel from_choi(const ChoiMatrix& choi) {
    auto [ops, rank] = choi_kraus(choi);
    if (rank == 0) throw invariant_error("from_choi: Choi matrix is numerically zero");
    return KrausChannel(std::move(ops), true);
}

int choi_rank(const ChoiMatrix& choi) { return choi_kraus(choi).second; }

KrausChannel minimalize(const KrausChannel& channel) {
    if (channel.minimal()) return channel;
    return from_choi(to_choi(channel));
}

// ---------------------------------------------------------------------------
// Extremality
// ---------------------------------------------------------------------------

ExtremalityReport is_extremal(const KrausChannel& channel) {
    if (!channel.minimal())
        throw shape_error("is_extremal: channel must be minimal (run minimalize first)");
    const int n = channel.size();
    std::vector<Matrix> products;
    products.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            products.push_back(channel.op(i).adjoint() * channel.op(j));

    Matrix stack(products.front().size(), static_cast<Eigen::Index>(products.size()));
    for (size_t k = 0; k < products.size(); ++k)
        stack.col(static_cast<Eigen::Index>(k)) = vec_op(products[k]);
    Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sv_max = sv(0);
    const double sv_min = stack.cols() > stack.rows() ? 0.0 : sv(sv.size() - 1);

    ExtremalityReport report{sv_min > tol::extremal_sv * sv_max, sv_min, sv_max, std::nullopt};
    if (!report.extremal) {
        // Full V's trailing column lies in (or closest to) the kernel.
        const Vector null_coeffs = svd.matrixV().col(svd.matrixV().cols() - 1);
        Matrix witness(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) witness(i, j) = null_coeffs(i * n + j);
        report.witness = std::move(witness);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Convex combination and comparison
// ---------------------------------------------------------------------------

KrausChannel convex_combine(const std::vector<KrausChannel>& channels,
                            const std::vector<double>& weights) {
    if (channels.empty() || channels.size() != weights.size())
        throw shape_error("convex_combine: channels/weights size mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw shape_error("convex_combine: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > tol::weight_sum)
        throw shape_error("convex_combine: weights sum to " + std::to_string(total));
    std::vector<Matrix> ops;
    for (size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].dim_in() != channels.front().dim_in() ||
            channels[i].dim_out() != channels.front().dim_out())
            throw shape_error("convex_combine: channel dimension mismatch");
        if (weights[i] == 0.0) continue;  // dropped, not an error
        for (const Matrix& m : channels[i].kraus()) ops.push_back(std::sqrt(weights[i]) * m);
    }
    return KrausChannel(std::move(ops));
}

double channel_distance(const KrausChannel& a, const KrausChannel& b, int probes,
                        std::uint64_t seed) {
    if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
        throw shape_error("channel_distance: dimension mismatch");
    Rng rng(seed);
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        DensityMatrix probe = (p < a.dim_in()) ? DensityMatrix::basis_state(a.dim_in(), p)
                                               : DensityMatrix::pure(random_pure(rng, a.dim_in()));
        worst = std::max(worst, trace_distance(apply(a, probe), apply(b, probe)));
    }
    return worst;
}

} // namespace heatops
