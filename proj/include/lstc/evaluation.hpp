#pragma once

#include "lstc/mask.hpp"
#include "lstc/transforms.hpp"

#include <cstdint>
#include <vector>

namespace lstc {

enum class MissingPattern { Random, NonRandom };

/// How held-out entries are drawn from a base observation mask.
/// Random masks individual entries; NonRandom masks whole (sensor, day)
/// fibers. rate is an independent per-entry (or per-fiber) probability
/// unless exact_quota asks for a fixed-size seeded sample instead.
struct MaskSpec {
  MissingPattern pattern = MissingPattern::Random;
  double rate = 0.3;
  std::uint64_t seed = 0;
  bool exact_quota = false;

  bool operator==(const MaskSpec&) const = default;
};

struct MaskPair {
  ObservationMask train;
  ObservationMask test;
};

/// Splits the base mask into disjoint train/test masks covering it exactly.
/// Only base-observed entries can enter either side. Deterministic per seed.
/// Throws when the draw leaves train or test empty.
MaskPair generate_mask(const ObservationMask& base, TensorDims dims, const MaskSpec& spec);

struct EvalReport {
  double mape = 0.0;               // percent
  double rmse = 0.0;               // data units
  std::int64_t n_eval = 0;         // test entries evaluated (RMSE denominator)
  std::int64_t n_skipped_zero = 0; // entries with |truth| < 1e-12, excluded from MAPE
};

EvalReport evaluate(const Matrix& truth, const Matrix& recovered, const ObservationMask& test);

/// truth - recovered per test entry, row-major order.
std::vector<double> residuals(const Matrix& truth, const Matrix& recovered,
                              const ObservationMask& test);

/// Descending singular values of each forward-transformed frontal slice.
std::vector<std::vector<double>> spectrum(const Tensor3& x, const TransformMatrix& phi);

}  // namespace lstc
