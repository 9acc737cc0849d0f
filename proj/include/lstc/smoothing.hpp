#pragma once

#include "lstc/tensor.hpp"

namespace lstc {

/// Sum over consecutive columns of ||z_t - z_{t-1}||^2. Zero when T = 1.
double quadratic_variation(const Matrix& z);

/// Normal equations of the quadratic-variation penalty: the symmetric
/// positive definite tridiagonal matrix D^T D + alpha*I, where D is the
/// (T-1) x T forward-difference operator. Main diagonal is
/// (1+alpha, 2+alpha, ..., 2+alpha, 1+alpha), every off-diagonal entry -1.
/// The factorization for the Thomas solve is cached at build time.
struct SmoothingSystem {
  int length = 0;        // T
  double alpha = 0.0;    // rho / lambda
  Eigen::VectorXd diag;  // main diagonal, size T

  // Forward-eliminated superdiagonal and the pivots it leaves behind,
  // shared by every row solve.
  Eigen::VectorXd upper_factors;  // size T-1
  Eigen::VectorXd pivots;         // size T
};

SmoothingSystem build_system(int length, double alpha);

/// Solves Z * (D^T D + alpha*I) = alpha * B row by row with the cached
/// tridiagonal factorization. O(rows * T).
Matrix solve_smoothing(const Matrix& b, const SmoothingSystem& sys);

}  // namespace lstc
