#pragma once

#include "lstc/transforms.hpp"

#include <vector>

namespace lstc {

/// Diagnostics from one singular value shrink.
struct SvtReport {
  int slice = 0;                    // frontal-slice index (0 for bare matrices)
  int retained_rank = 0;            // count of input singular values > tau
  double sigma_max_retained = 0.0;  // largest retained input singular value
  double sigma_min_retained = 0.0;  // smallest retained input singular value
  double tau = 0.0;
  double nuclear_norm = 0.0;        // sum of shrunk singular values of the output
};

/// Proximal operator of the nuclear norm: U * max(S - tau, 0) * V^T.
/// The output's singular values are max(sigma_i - tau, 0).
Matrix matrix_svt(const Matrix& a, double tau, SvtReport* report = nullptr);

/// Shrinks each frontal slice of the forward-transformed tensor and maps the
/// result back. Slices are processed concurrently; each writes a disjoint
/// block so the output does not depend on scheduling.
Tensor3 tensor_svt(const Tensor3& z, const TransformMatrix& phi, double tau,
                   std::vector<SvtReport>* reports = nullptr);

}  // namespace lstc
