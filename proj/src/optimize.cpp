// optimize.cpp

#include "heatops/optimize.hpp"

#include <cmath>
#include <deque>

#include "heatops/random.hpp"

namespace heatops {

Matrix log_floored(const Matrix& rho, double floor) {
    const SpectralDecomposition sd = spectral(rho);
    RealVector logs(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < logs.size(); ++i)
        logs(i) = std::log(std::max(sd.eigenvalues(i), floor));
    return sd.eigenvectors * logs.asDiagonal().toDenseMatrix().cast<Complex>() *
           sd.eigenvectors.adjoint();
}

namespace {

using RVec = Eigen::VectorXd;

Matrix unpack(const RVec& x, int d) {
    Matrix l(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const int base = 2 * (j * d + i);
            l(i, j) = Complex(x(base), x(base + 1));
        }
    return l;
}

RVec pack(const Matrix& l) {
    const int d = static_cast<int>(l.rows());
    RVec x(2 * d * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const int base = 2 * (j * d + i);
            x(base) = l(i, j).real();
            x(base + 1) = l(i, j).imag();
        }
    return x;
}

DensityMatrix state_of(const Matrix& l) {
    Matrix rho = l * l.adjoint();
    const double t = rho.trace().real();
    if (!(t > 0.0)) throw numeric_error("minimize_over_states: degenerate parameter");
    return DensityMatrix(hermitize(rho / t));
}

} // namespace

StateOptimum minimize_over_states(
    const std::function<double(const DensityMatrix&)>& objective,
    const std::function<Matrix(const DensityMatrix&)>& euclidean_gradient, int dim,
    int starts, std::uint64_t seed, int max_iterations) {
    if (dim < 1 || starts < 1) throw shape_error("minimize_over_states: bad arguments");
    Rng rng(seed);

    auto value_and_grad = [&](const RVec& x, RVec* grad_out) {
        const Matrix l = unpack(x, dim);
        const double t = (l * l.adjoint()).trace().real();
        const DensityMatrix rho = state_of(l);
        const double f = objective(rho);
        if (grad_out) {
            const Matrix g = euclidean_gradient(rho);
            const double mean = (g * rho.matrix()).trace().real();
            // Wirtinger derivative through ρ = LL†/tr(LL†).
            const Matrix dl = (g - mean * Matrix::Identity(dim, dim)) * l / t;
            *grad_out = 2.0 * pack(dl);
        }
        return f;
    };

    double best_value = std::numeric_limits<double>::infinity();
    Matrix best_l = Matrix::Identity(dim, dim);

    for (int start = 0; start < starts; ++start) {
        Matrix l0;
        if (start == 0)
            l0 = Matrix::Identity(dim, dim);
        else if (dim > 1 && start == 1) {
            // Near-pure start, slightly regularized.
            l0 = 0.05 * Matrix::Identity(dim, dim);
            l0.col(0) += random_pure(rng, dim);
        } else {
            const int rank = 1 + rng.uniform_int(0, dim - 1);
            l0 = Matrix::Zero(dim, dim);
            l0.leftCols(rank) = ginibre(rng, dim, rank);
            l0 += 1e-3 * Matrix::Identity(dim, dim);
        }
        RVec x = pack(l0 / l0.norm());

        // L-BFGS with memory 8.
        std::deque<RVec> s_hist, y_hist;
        RVec grad(x.size());
        double f = value_and_grad(x, &grad);
        for (int it = 0; it < max_iterations; ++it) {
            const double gnorm = grad.norm();
            if (gnorm < 1e-12 * std::max(1.0, std::abs(f))) break;

            // Two-loop recursion.
            RVec q = grad;
            std::vector<double> alpha(s_hist.size());
            for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
                const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
                alpha[i] = rho_i * s_hist[i].dot(q);
                q -= alpha[i] * y_hist[i];
            }
            if (!s_hist.empty()) {
                const double gamma =
                    s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
                q *= gamma;
            }
            for (size_t i = 0; i < s_hist.size(); ++i) {
                const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
                const double beta = rho_i * y_hist[i].dot(q);
                q += (alpha[i] - beta) * s_hist[i];
            }
            RVec direction = -q;
            if (direction.dot(grad) > -1e-16 * direction.norm() * gnorm)
                direction = -grad;  // safeguard: fall back to steepest descent

            // Armijo backtracking.
            double step = 1.0;
            const double slope = direction.dot(grad);
            RVec x_next;
            double f_next = f;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                x_next = x + step * direction;
                f_next = value_and_grad(x_next, nullptr);
                if (f_next <= f + 1e-4 * step * slope) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;

            RVec grad_next(x.size());
            value_and_grad(x_next, &grad_next);
            const RVec s_vec = x_next - x;
            const RVec y_vec = grad_next - grad;
            if (y_vec.dot(s_vec) > 1e-14 * s_vec.norm() * y_vec.norm()) {
                s_hist.push_back(s_vec);
                y_hist.push_back(y_vec);
                if (s_hist.size() > 8) {
                    s_hist.pop_front();
                    y_hist.pop_front();
                }
            }
            x = x_next;
            f = f_next;
            grad = grad_next;

            // Re-normalize the scale-invariant parameterization.
            Matrix l = unpack(x, dim);
            const double norm = l.norm();
            if (norm > 0.0 && (norm > 4.0 || norm < 0.25)) {
                x = pack(l / norm);
                value_and_grad(x, &grad);
            }
        }
        if (f < best_value) {
            best_value = f;
            best_l = unpack(x, dim);
        }
    }
    return {best_value, state_of(best_l)};
}

} // namespace heatops
