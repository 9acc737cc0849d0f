#include "lstc/mask.hpp"

#include <algorithm>

namespace lstc {

namespace {

void check_grid_dims(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ObservationMask: grid must be at least 1x1");
  }
}

}  // namespace

ObservationMask::ObservationMask(int rows, int cols) : rows_(rows), cols_(cols) {
  check_grid_dims(rows, cols);
}

ObservationMask ObservationMask::full(int rows, int cols) {
  ObservationMask mask(rows, cols);
  mask.dense_ = true;
  mask.grid_.assign(static_cast<std::size_t>(mask.grid_size()), 1);
  mask.count_ = mask.grid_size();
  return mask;
}

ObservationMask ObservationMask::from_grid(int rows, int cols,
                                           const std::vector<std::uint8_t>& row_major_grid) {
  ObservationMask mask(rows, cols);
  if (static_cast<std::int64_t>(row_major_grid.size()) != mask.grid_size()) {
    throw std::invalid_argument("ObservationMask: grid size mismatch");
  }
  mask.count_ = std::count_if(row_major_grid.begin(), row_major_grid.end(),
                              [](std::uint8_t v) { return v != 0; });
  if (mask.count_ * 8 > mask.grid_size()) {
    mask.dense_ = true;
    mask.grid_.resize(row_major_grid.size());
    std::transform(row_major_grid.begin(), row_major_grid.end(), mask.grid_.begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v != 0; });
  } else {
    mask.dense_ = false;
    mask.indices_.reserve(static_cast<std::size_t>(mask.count_));
    for (std::int64_t lin = 0; lin < mask.grid_size(); ++lin) {
      if (row_major_grid[static_cast<std::size_t>(lin)]) mask.indices_.push_back(lin);
    }
  }
  return mask;
}

ObservationMask ObservationMask::from_indices(int rows, int cols,
                                              const std::vector<std::pair<int, int>>& pairs) {
  check_grid_dims(rows, cols);
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(rows) * cols, 0);
  for (const auto& [m, n] : pairs) {
    if (m < 0 || m >= rows || n < 0 || n >= cols) {
      throw std::invalid_argument("ObservationMask: index out of range");
    }
    grid[static_cast<std::size_t>(m) * cols + n] = 1;
  }
  return from_grid(rows, cols, grid);
}

bool ObservationMask::contains(int m, int n) const {
  if (m < 0 || m >= rows_ || n < 0 || n >= cols_) return false;
  const std::int64_t lin = static_cast<std::int64_t>(m) * cols_ + n;
  if (dense_) return grid_[static_cast<std::size_t>(lin)] != 0;
  return std::binary_search(indices_.begin(), indices_.end(), lin);
}

bool ObservationMask::operator==(const ObservationMask& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || count_ != other.count_) return false;
  bool equal = true;
  for_each_observed([&](int m, int n) { equal = equal && other.contains(m, n); });
  return equal;
}

namespace {

void check_shape(const Matrix& y, const ObservationMask& mask, const char* op) {
  if (y.rows() != mask.rows() || y.cols() != mask.cols()) {
    throw std::invalid_argument(std::string(op) + ": matrix/mask shape mismatch");
  }
}

}  // namespace

Matrix project(const Matrix& y, const ObservationMask& mask) {
  check_shape(y, mask, "project");
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  mask.for_each_observed([&](int m, int n) { out(m, n) = y(m, n); });
  return out;
}

Matrix overwrite_observed(const Matrix& z, const Matrix& y, const ObservationMask& mask) {
  check_shape(z, mask, "overwrite_observed");
  check_shape(y, mask, "overwrite_observed");
  Matrix out = z;
  mask.for_each_observed([&](int m, int n) { out(m, n) = y(m, n); });
  return out;
}

}  // namespace lstc
