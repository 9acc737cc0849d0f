#include "lstc/smoothing.hpp"

#include "lstc/parallel.hpp"

#include <cassert>

namespace lstc {

double quadratic_variation(const Matrix& z) {
  const Eigen::Index T = z.cols();
  if (T <= 1) return 0.0;
  return (z.rightCols(T - 1) - z.leftCols(T - 1)).squaredNorm();
}

SmoothingSystem build_system(int length, double alpha) {
  if (length < 1) throw std::invalid_argument("build_system: length must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("build_system: alpha must be positive");

  SmoothingSystem sys;
  sys.length = length;
  sys.alpha = alpha;
  sys.diag = Eigen::VectorXd::Constant(length, 2.0 + alpha);
  sys.diag[0] = 1.0 + alpha;
  sys.diag[length - 1] = (length == 1) ? alpha : 1.0 + alpha;

  // Thomas forward elimination with all off-diagonal entries equal to -1.
  sys.pivots.resize(length);
  sys.upper_factors.resize(length - 1);
  sys.pivots[0] = sys.diag[0];
  for (int t = 0; t + 1 < length; ++t) {
    assert(sys.pivots[t] > 0.0);
    sys.upper_factors[t] = -1.0 / sys.pivots[t];
    sys.pivots[t + 1] = sys.diag[t + 1] + sys.upper_factors[t];
  }
  return sys;
}

Matrix solve_smoothing(const Matrix& b, const SmoothingSystem& sys) {
  const Eigen::Index T = sys.length;
  if (b.cols() != T) throw std::invalid_argument("solve_smoothing: column count mismatch");

  Matrix z(b.rows(), T);
  const int rows = static_cast<int>(b.rows());
  parallel_for(rows, [&](int m) {
    // Forward substitution of alpha*b_row, then back substitution.
    Eigen::VectorXd rhs(T);
    rhs[0] = sys.alpha * b(m, 0);
    for (Eigen::Index t = 1; t < T; ++t) {
      rhs[t] = sys.alpha * b(m, t) + rhs[t - 1] / sys.pivots[t - 1];
    }
    z(m, T - 1) = rhs[T - 1] / sys.pivots[T - 1];
    for (Eigen::Index t = T - 2; t >= 0; --t) {
      z(m, t) = (rhs[t] + z(m, t + 1)) / sys.pivots[t];
    }
  });
  return z;
}

}  // namespace lstc
