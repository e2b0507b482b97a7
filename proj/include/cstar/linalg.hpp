#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cstar/error.hpp"

namespace cstar {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Relative tolerance used wherever an operation does not override it.
inline constexpr double kDefaultTol = 1e-9;

struct HermEig {
  RVec values;   // ascending
  CMat vectors;  // columns are the matching orthonormal eigenvectors
};

CMat adjoint(const CMat& m);

/// Frobenius norm; cheap upper bound for op_norm used for scaling tolerances.
double frob(const CMat& m);

bool is_diagonal(const CMat& m);

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws NotHermitian when ||m - m*|| > tol * ||m||.
HermEig herm_eig(const CMat& m, double tol = kDefaultTol);

/// Operator (spectral) norm: square root of the largest eigenvalue of m* m.
double op_norm(const CMat& m);

/// Singular values in ascending order, read off the Hermitian dilation
/// [[0, m], [m*, 0]] so that small values keep absolute accuracy.
RVec singular_values(const CMat& m);

double smallest_singular_value(const CMat& m);

/// Throws Singular if the smallest singular value is <= tol * ||m||.
CMat invert(const CMat& m, double tol = kDefaultTol);

/// All n eigenvalues with multiplicity: Householder reduction to Hessenberg
/// form followed by single-shift complex QR. Throws NoConvergence when the
/// iteration budget is exhausted.
std::vector<Complex> eig_general(const CMat& m, int max_iterations = 10000);

/// Orthonormal basis (as columns) of the approximate null space of a
/// Hermitian positive semidefinite matrix.
CMat null_basis(const CMat& g, double tol = kDefaultTol);

/// Orthonormal basis (as columns) of {v : ||m v|| <= tol * max(1, ||m||)}
/// for an arbitrary square matrix.
CMat kernel(const CMat& m, double tol);

/// Trace pairing <x, y> = trace(y* x).
Complex trace_pairing(const CMat& x, const CMat& y);

CMat identity(Eigen::Index n);

}  // namespace cstar
