#pragma once

#include "minionlab/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace minionlab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Field { real, complex };

/// Operator norm (largest singular value). Intended for the small dense
/// matrices this project works with.
double op_norm(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol);

/// Orthogonal projector test: hermitian and idempotent within tol.
bool is_projector(const Matrix& m, double tol);

/// Projector onto the span of the given orthonormal columns (d x k, k may
/// be zero). Returns the d x d matrix B B*.
Matrix projector_onto(const Matrix& orthonormal_columns);

/// Orthonormal basis of the range of a near-projector: eigenvectors of the
/// hermitized input with eigenvalue > 1/2, as columns.
Matrix range_basis(const Matrix& near_projector);

/// Max deviation of V* V from the identity; 0 columns give 0.
double orthonormality_residual(const Matrix& columns);

/// Haar-ish random unitary (orthogonal for Field::real): QR of a Gaussian
/// matrix with the phase of R's diagonal fixed, so the draw is a pure
/// function of the rng state.
Matrix random_unitary(Rng& rng, int d, Field field);

/// Random unit vector.
Vector random_unit_vector(Rng& rng, int d, Field field);

} // namespace minionlab
