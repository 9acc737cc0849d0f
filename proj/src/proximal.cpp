#include "lstc/proximal.hpp"

#include "lstc/parallel.hpp"

#include <Eigen/SVD>

#include <string>

namespace lstc {

namespace {

// Shrink of a matrix that is at least as tall as it is wide.
Matrix svt_tall(const Matrix& a, double tau, SvtReport* report) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("matrix_svt: singular value decomposition did not converge");
  }
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::VectorXd shrunk = (sigma.array() - tau).max(0.0);

  if (report != nullptr) {
    report->tau = tau;
    report->retained_rank = 0;
    report->sigma_max_retained = 0.0;
    report->sigma_min_retained = 0.0;
    report->nuclear_norm = shrunk.sum();
    // Values in the backend's noise floor count as zero for reporting only;
    // the shrink formula above needs no cutoff.
    const double floor = sigma.size() > 0 ? 1e-12 * sigma[0] : 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma[i] > tau && sigma[i] >= floor) {
        ++report->retained_rank;
        report->sigma_min_retained = sigma[i];
      }
    }
    if (report->retained_rank > 0) report->sigma_max_retained = sigma[0];
  }

  const int rank = static_cast<int>((shrunk.array() > 0.0).count());
  if (rank == 0) return Matrix::Zero(a.rows(), a.cols());
  return svd.matrixU().leftCols(rank) * shrunk.head(rank).asDiagonal() *
         svd.matrixV().leftCols(rank).transpose();
}

}  // namespace

Matrix matrix_svt(const Matrix& a, double tau, SvtReport* report) {
  if (!(tau > 0.0)) throw std::invalid_argument("matrix_svt: tau must be positive");
  if (!a.allFinite()) throw std::invalid_argument("matrix_svt: input has non-finite entries");
  // Factor in the tall orientation; the wide case is handled through the
  // transpose, which shares the singular values.
  if (a.rows() >= a.cols()) return svt_tall(a, tau, report);
  return svt_tall(a.transpose(), tau, report).transpose();
}

Tensor3 tensor_svt(const Tensor3& z, const TransformMatrix& phi, double tau,
                   std::vector<SvtReport>* reports) {
  if (!(tau > 0.0)) throw std::invalid_argument("tensor_svt: tau must be positive");
  const int J = z.dims().days;
  Tensor3 transformed = forward(z, phi);
  if (reports != nullptr) reports->assign(static_cast<std::size_t>(J), SvtReport{});

  Tensor3 shrunk(z.dims());
  parallel_for(J, [&](int j) {
    SvtReport report;
    try {
      shrunk.slice(j) = matrix_svt(transformed.slice(j), tau, &report);
    } catch (const std::exception& e) {
      throw std::runtime_error("tensor_svt: slice " + std::to_string(j) + ": " + e.what());
    }
    report.slice = j;
    if (reports != nullptr) (*reports)[static_cast<std::size_t>(j)] = report;
  });
  return inverse(shrunk, phi);
}

}  // namespace lstc
