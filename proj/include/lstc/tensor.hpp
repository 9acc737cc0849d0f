#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lstc {

using Matrix = Eigen::MatrixXd;

/// Shape of a (sensor x interval-of-day x day) tensor. The flattened time
/// axis has length T = I*J with column t <-> (interval i, day j), t = j*I + i.
struct TensorDims {
  int sensors = 0;        // M
  int intervals = 0;      // I, time points per day
  int days = 0;           // J

  TensorDims() = default;
  TensorDims(int m, int i, int j) : sensors(m), intervals(i), days(j) {
    if (m < 1 || i < 1 || j < 1) {
      throw std::invalid_argument("TensorDims: all sizes must be >= 1");
    }
  }

  std::int64_t time_points() const {
    return static_cast<std::int64_t>(intervals) * days;
  }
  std::int64_t element_count() const { return sensors * time_points(); }

  bool operator==(const TensorDims&) const = default;
};

/// Dense third-order tensor of shape sensors x intervals x days.
///
/// Storage is a single contiguous buffer with the sensor index fastest and
/// the day index slowest: linear(m, i, j) = m + M*(i + I*j). Each frontal
/// slice (fixed day j) is therefore one contiguous column-major M x I block,
/// and the buffer as a whole coincides with the column-major M x (I*J)
/// spatiotemporal matrix under t = j*I + i.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(TensorDims dims)
      : dims_(dims), values_(static_cast<std::size_t>(dims.element_count()), 0.0) {}
  Tensor3(TensorDims dims, std::vector<double> values)
      : dims_(dims), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != dims_.element_count()) {
      throw std::invalid_argument("Tensor3: value count does not match dims");
    }
  }

  const TensorDims& dims() const { return dims_; }

  double operator()(int m, int i, int j) const { return values_[index(m, i, j)]; }
  double& operator()(int m, int i, int j) { return values_[index(m, i, j)]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

  /// Zero-copy view of frontal slice j as an M x I matrix.
  Eigen::Map<const Matrix> slice(int j) const {
    check_day(j);
    return {values_.data() + slice_offset(j), dims_.sensors, dims_.intervals};
  }
  Eigen::Map<Matrix> slice(int j) {
    check_day(j);
    return {values_.data() + slice_offset(j), dims_.sensors, dims_.intervals};
  }

  double frobenius_norm() const;
  bool all_finite() const;

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator-=(const Tensor3& other);
  Tensor3& operator*=(double scalar);
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }

 private:
  std::size_t index(int m, int i, int j) const {
    return static_cast<std::size_t>(m) +
           static_cast<std::size_t>(dims_.sensors) *
               (static_cast<std::size_t>(i) +
                static_cast<std::size_t>(dims_.intervals) * static_cast<std::size_t>(j));
  }
  std::int64_t slice_offset(int j) const {
    return static_cast<std::int64_t>(dims_.sensors) * dims_.intervals * j;
  }
  void check_day(int j) const {
    if (j < 0 || j >= dims_.days) throw std::out_of_range("Tensor3: day index");
  }

  TensorDims dims_;
  std::vector<double> values_;
};

/// Mode-k unfolding: mode 1 -> M x (I*J), mode 2 -> I x (M*J),
/// mode 3 -> J x (M*I). Column order follows the usual convention where the
/// remaining indices vary with the lower-numbered mode fastest.
Matrix unfold(const Tensor3& t, int mode);

/// Inverse of unfold for the same mode and dims.
Tensor3 fold(const Matrix& m, int mode, TensorDims dims);

/// Q: reshape an M x (I*J) matrix into the tensor with
/// result(m, i, j) = y(m, j*I + i).
Tensor3 tensorize(const Matrix& y, TensorDims dims);

/// Q^-1: inverse of tensorize.
Matrix matricize(const Tensor3& x);

}  // namespace lstc
