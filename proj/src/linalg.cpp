#include "minionlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace minionlab {

double op_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_projector(const Matrix& m, double tol) {
    return is_hermitian(m, tol) && op_norm(m * m - m) <= tol;
}

Matrix projector_onto(const Matrix& orthonormal_columns) {
    const auto d = orthonormal_columns.rows();
    if (orthonormal_columns.cols() == 0)
        return Matrix::Zero(d, d);
    return orthonormal_columns * orthonormal_columns.adjoint();
}

Matrix range_basis(const Matrix& near_projector) {
    Matrix h = (near_projector + near_projector.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    int rank = 0;
    for (int i = 0; i < h.rows(); ++i)
        if (es.eigenvalues()(i) > 0.5)
            ++rank;
    // eigenvalues are ascending, so the range vectors sit at the tail
    return es.eigenvectors().rightCols(rank);
}

double orthonormality_residual(const Matrix& columns) {
    const auto k = columns.cols();
    if (k == 0)
        return 0.0;
    Matrix gram = columns.adjoint() * columns;
    return (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

Matrix random_unitary(Rng& rng, int d, Field field) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            g(i, j) = field == Field::complex ? rng.normal_complex()
                                              : std::complex<double>(rng.normal(), 0.0);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        std::complex<double> diag = r(j, j);
        double mag = std::abs(diag);
        if (mag > 0)
            q.col(j) *= diag / mag;
    }
    return q;
}

Vector random_unit_vector(Rng& rng, int d, Field field) {
    Vector v(d);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < d; ++i)
            v(i) = field == Field::complex ? rng.normal_complex()
                                           : std::complex<double>(rng.normal(), 0.0);
        norm2 = v.squaredNorm();
    } while (norm2 < 1e-12);
    return v / std::sqrt(norm2);
}

} // namespace minionlab
