// random.cpp

#include "heatops/random.hpp"

#include <cmath>

namespace heatops {

Matrix ginibre(Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = Complex(rng.normal(), rng.normal());
    return m;
}

Vector random_pure(Rng& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
    return v / v.norm();
}

DensityMatrix random_density(Rng& rng, int dim, int rank) {
    if (rank <= 0 || rank > dim) rank = dim;
    const Matrix l = ginibre(rng, dim, rank);
    Matrix rho = l * l.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitize(rho));
}

Matrix random_unitary(Rng& rng, int dim) {
    // QR of a Ginibre matrix with the R-diagonal phases folded in gives Haar.
    const Matrix g = ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : Complex(1.0, 0.0));
    }
    return q;
}

Isometry random_isometry(Rng& rng, int dim_in, int dim_out) {
    if (dim_out < dim_in) throw shape_error("random_isometry: dim_out must be >= dim_in");
    return Isometry(random_unitary(rng, dim_out).leftCols(dim_in));
}

HermitianOperator random_hermitian(Rng& rng, int dim, Units units, double scale) {
    const Matrix g = ginibre(rng, dim, dim);
    return HermitianOperator(hermitize(g) * (scale / std::sqrt(2.0)), units);
}

} // namespace heatops
