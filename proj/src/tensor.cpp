#include "lstc/tensor.hpp"

#include <cmath>
#include <cstring>

namespace lstc {

double Tensor3::frobenius_norm() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), values_.size()).norm();
}

bool Tensor3::all_finite() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), values_.size())
      .allFinite();
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("Tensor3 +=: dims mismatch");
  Eigen::Map<Eigen::VectorXd>(values_.data(), values_.size()) +=
      Eigen::Map<const Eigen::VectorXd>(other.values_.data(), other.values_.size());
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("Tensor3 -=: dims mismatch");
  Eigen::Map<Eigen::VectorXd>(values_.data(), values_.size()) -=
      Eigen::Map<const Eigen::VectorXd>(other.values_.data(), other.values_.size());
  return *this;
}

Tensor3& Tensor3::operator*=(double scalar) {
  Eigen::Map<Eigen::VectorXd>(values_.data(), values_.size()) *= scalar;
  return *this;
}

Matrix unfold(const Tensor3& t, int mode) {
  const auto& d = t.dims();
  const int M = d.sensors, I = d.intervals, J = d.days;
  switch (mode) {
    case 1: {
      // (m, i + I*j): identical to the storage layout.
      return Eigen::Map<const Matrix>(t.data(), M, static_cast<Eigen::Index>(I) * J);
    }
    case 2: {
      Matrix out(I, static_cast<Eigen::Index>(M) * J);
      for (int j = 0; j < J; ++j) {
        out.middleCols(static_cast<Eigen::Index>(M) * j, M) = t.slice(j).transpose();
      }
      return out;
    }
    case 3: {
      // Row j is frontal slice j flattened; a row-major view of the buffer.
      using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      return Eigen::Map<const RowMajor>(t.data(), J, static_cast<Eigen::Index>(M) * I);
    }
    default:
      throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}

Tensor3 fold(const Matrix& m, int mode, TensorDims dims) {
  const int M = dims.sensors, I = dims.intervals, J = dims.days;
  const auto expect_shape = [&](Eigen::Index rows, Eigen::Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
      throw std::invalid_argument("fold: matrix shape does not match mode/dims");
    }
  };
  Tensor3 out(dims);
  switch (mode) {
    case 1:
      expect_shape(M, static_cast<Eigen::Index>(I) * J);
      Eigen::Map<Matrix>(out.data(), M, static_cast<Eigen::Index>(I) * J) = m;
      return out;
    case 2:
      expect_shape(I, static_cast<Eigen::Index>(M) * J);
      for (int j = 0; j < J; ++j) {
        out.slice(j) = m.middleCols(static_cast<Eigen::Index>(M) * j, M).transpose();
      }
      return out;
    case 3: {
      expect_shape(J, static_cast<Eigen::Index>(M) * I);
      using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      Eigen::Map<RowMajor>(out.data(), J, static_cast<Eigen::Index>(M) * I) = m;
      return out;
    }
    default:
      throw std::invalid_argument("fold: mode must be 1, 2 or 3");
  }
}

Tensor3 tensorize(const Matrix& y, TensorDims dims) {
  if (y.rows() != dims.sensors || y.cols() != dims.time_points()) {
    throw std::invalid_argument("tensorize: matrix shape does not match dims");
  }
  // Under t = j*I + i the column-major matrix buffer and the tensor buffer
  // share the same linear layout.
  Tensor3 out(dims);
  std::memcpy(out.data(), y.data(), sizeof(double) * y.size());
  return out;
}

Matrix matricize(const Tensor3& x) {
  const auto& d = x.dims();
  return Eigen::Map<const Matrix>(x.data(), d.sensors, d.time_points());
}

}  // namespace lstc
