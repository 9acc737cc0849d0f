#pragma once

#include "lstc/tensor.hpp"

namespace lstc {

enum class TransformKind { DataDriven, Dct, Identity };

/// Orthogonal J x J matrix applied along the day mode. Columns are the basis
/// vectors of the transformed domain: the forward transform multiplies the
/// mode-3 unfolding by the transpose, the inverse by the matrix itself.
/// Column signs are canonicalized (largest-magnitude entry positive, ties to
/// the lowest index) so repeated fits are deterministic.
struct TransformMatrix {
  Matrix entries;
  TransformKind kind = TransformKind::Identity;
  bool degenerate = false;  // set when fitted from an all-zero tensor

  int order() const { return static_cast<int>(entries.rows()); }
};

/// fold3(Phi^T * unfold3(x)). Norm-preserving.
Tensor3 forward(const Tensor3& x, const TransformMatrix& phi);

/// fold3(Phi * unfold3(x)). Exact inverse of forward.
Tensor3 inverse(const Tensor3& x, const TransformMatrix& phi);

/// Fits the transform whose columns are the left singular vectors of the
/// J x (M*I) mode-3 unfolding, ordered by descending singular value.
/// Computed from the J x J Gram matrix of the unfolding, which is much
/// cheaper than a full SVD at the J values this library targets.
/// An all-zero tensor yields the identity with the degenerate flag set.
TransformMatrix fit_data_driven(const Tensor3& x);

/// Orthonormal DCT-II basis of the given order; column k samples
/// sqrt(2/J)*cos(pi*(2n+1)*k/(2J)), scaled by 1/sqrt(2) for k = 0.
TransformMatrix dct_matrix(int order);

TransformMatrix identity_transform(int order);

/// Flips negatively-signed columns so each column's largest-magnitude entry
/// is positive. Exposed for tests.
void canonicalize_column_signs(Matrix& m);

}  // namespace lstc
