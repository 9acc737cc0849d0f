#include "lstc/transforms.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace lstc {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_order(const Tensor3& x, const TransformMatrix& phi, const char* op) {
  if (phi.order() != x.dims().days || phi.entries.cols() != phi.entries.rows()) {
    throw std::invalid_argument(std::string(op) + ": transform order does not match day count");
  }
}

Tensor3 apply_along_days(const Tensor3& x, const Matrix& coeffs) {
  // fold3(coeffs * unfold3(x)) without materializing the unfoldings: the
  // mode-3 unfolding is a row-major view of the tensor buffer.
  const auto& d = x.dims();
  Tensor3 out(d);
  const Eigen::Index width = static_cast<Eigen::Index>(d.sensors) * d.intervals;
  Eigen::Map<RowMajor> out_view(out.data(), d.days, width);
  Eigen::Map<const RowMajor> in_view(x.data(), d.days, width);
  out_view.noalias() = coeffs * in_view;
  return out;
}

}  // namespace

Tensor3 forward(const Tensor3& x, const TransformMatrix& phi) {
  check_order(x, phi, "forward");
  if (phi.kind == TransformKind::Identity) return x;
  return apply_along_days(x, phi.entries.transpose());
}

Tensor3 inverse(const Tensor3& x, const TransformMatrix& phi) {
  check_order(x, phi, "inverse");
  if (phi.kind == TransformKind::Identity) return x;
  return apply_along_days(x, phi.entries);
}

void canonicalize_column_signs(Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index pivot = 0;
    m.col(c).cwiseAbs().maxCoeff(&pivot);
    if (m(pivot, c) < 0.0) m.col(c) = -m.col(c);
  }
}

TransformMatrix fit_data_driven(const Tensor3& x) {
  const int J = x.dims().days;
  const Eigen::Index width = static_cast<Eigen::Index>(x.dims().sensors) * x.dims().intervals;
  Eigen::Map<const RowMajor> unfolding(x.data(), J, width);

  if (!(unfolding.squaredNorm() > 0.0)) {
    TransformMatrix phi = identity_transform(J);
    phi.kind = TransformKind::DataDriven;
    phi.degenerate = true;
    return phi;
  }

  // Left singular vectors of the unfolding = eigenvectors of its Gram matrix.
  Matrix gram(J, J);
  gram.noalias() = unfolding * unfolding.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("fit_data_driven: eigendecomposition failed");
  }

  TransformMatrix phi;
  phi.kind = TransformKind::DataDriven;
  phi.entries = eig.eigenvectors().rowwise().reverse();  // descending eigenvalues
  canonicalize_column_signs(phi.entries);
  return phi;
}

TransformMatrix dct_matrix(int order) {
  if (order < 1) throw std::invalid_argument("dct_matrix: order must be >= 1");
  TransformMatrix phi;
  phi.kind = TransformKind::Dct;
  phi.entries.resize(order, order);
  const double scale = std::sqrt(2.0 / order);
  for (int k = 0; k < order; ++k) {
    const double row_scale = (k == 0) ? scale / std::numbers::sqrt2 : scale;
    for (int n = 0; n < order; ++n) {
      phi.entries(n, k) =
          row_scale * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k / (2.0 * order));
    }
  }
  return phi;
}

TransformMatrix identity_transform(int order) {
  if (order < 1) throw std::invalid_argument("identity_transform: order must be >= 1");
  return {Matrix::Identity(order, order), TransformKind::Identity, false};
}

}  // namespace lstc
