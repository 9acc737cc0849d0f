#pragma once

#include "lstc/tensor.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace lstc {

/// Set of observed (sensor, time) index pairs over an M x T grid.
///
/// Dense masks (density > 1/8) keep a byte grid, sparse masks a sorted list
/// of row-major linear indices. Both iterate observed entries in row-major
/// order (sensor outer, time inner). Immutable after construction.
class ObservationMask {
 public:
  static ObservationMask full(int rows, int cols);
  static ObservationMask from_grid(int rows, int cols, const std::vector<std::uint8_t>& row_major_grid);
  static ObservationMask from_indices(int rows, int cols,
                                      const std::vector<std::pair<int, int>>& pairs);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t observed_count() const { return count_; }
  std::int64_t grid_size() const { return static_cast<std::int64_t>(rows_) * cols_; }
  bool empty() const { return count_ == 0; }
  double density() const { return static_cast<double>(count_) / grid_size(); }

  bool contains(int m, int n) const;

  template <typename Fn>
  void for_each_observed(Fn&& fn) const {
    if (dense_) {
      for (int m = 0; m < rows_; ++m) {
        const std::uint8_t* row = grid_.data() + static_cast<std::int64_t>(m) * cols_;
        for (int n = 0; n < cols_; ++n) {
          if (row[n]) fn(m, n);
        }
      }
    } else {
      for (std::int64_t lin : indices_) {
        fn(static_cast<int>(lin / cols_), static_cast<int>(lin % cols_));
      }
    }
  }

  bool operator==(const ObservationMask& other) const;

 private:
  ObservationMask(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::int64_t count_ = 0;
  bool dense_ = true;
  std::vector<std::uint8_t> grid_;      // dense representation
  std::vector<std::int64_t> indices_;   // sparse representation, sorted
};

/// P_Omega: keep observed entries, zero the rest. Linear and idempotent.
Matrix project(const Matrix& y, const ObservationMask& mask);

/// Returns z with the observed entries replaced by y's.
Matrix overwrite_observed(const Matrix& z, const Matrix& y, const ObservationMask& mask);

}  // namespace lstc
