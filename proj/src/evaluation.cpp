#include "lstc/evaluation.hpp"

#include "lstc/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace lstc {

namespace {

constexpr double kZeroTruthCutoff = 1e-12;

void check_spec(const MaskSpec& spec) {
  if (!(spec.rate > 0.0) || !(spec.rate < 1.0)) {
    throw std::invalid_argument("generate_mask: rate must lie in (0, 1)");
  }
}

// Per-fiber test decision for the NonRandom pattern, indexed by m*J + j.
std::vector<std::uint8_t> draw_fiber_flags(TensorDims dims, const MaskSpec& spec,
                                           const ObservationMask& base) {
  const int M = dims.sensors, I = dims.intervals, J = dims.days;
  std::vector<std::uint8_t> to_test(static_cast<std::size_t>(M) * J, 0);
  Rng rng(spec.seed);
  if (!spec.exact_quota) {
    for (auto& flag : to_test) flag = rng.uniform() < spec.rate ? 1 : 0;
    return to_test;
  }
  // Quota mode: sample a fixed count of the fibers that intersect the base.
  std::vector<std::int64_t> candidates;
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < J; ++j) {
      bool intersects = false;
      for (int i = 0; i < I && !intersects; ++i) {
        intersects = base.contains(m, j * I + i);
      }
      if (intersects) candidates.push_back(static_cast<std::int64_t>(m) * J + j);
    }
  }
  const auto quota = static_cast<std::size_t>(
      std::llround(spec.rate * static_cast<double>(candidates.size())));
  for (std::size_t k = candidates.size(); k > 1; --k) {
    std::swap(candidates[k - 1], candidates[rng.below(k)]);
  }
  for (std::size_t k = 0; k < quota && k < candidates.size(); ++k) {
    to_test[static_cast<std::size_t>(candidates[k])] = 1;
  }
  return to_test;
}

}  // namespace

MaskPair generate_mask(const ObservationMask& base, TensorDims dims, const MaskSpec& spec) {
  check_spec(spec);
  if (base.empty()) throw std::invalid_argument("generate_mask: base mask is empty");
  if (base.rows() != dims.sensors || base.cols() != dims.time_points()) {
    throw std::invalid_argument("generate_mask: base mask shape does not match dims");
  }

  std::vector<std::uint8_t> train_grid(static_cast<std::size_t>(base.grid_size()), 0);
  std::vector<std::uint8_t> test_grid(train_grid.size(), 0);
  const auto assign = [&](int m, int n, bool test) {
    (test ? test_grid : train_grid)[static_cast<std::size_t>(m) * base.cols() + n] = 1;
  };

  if (spec.pattern == MissingPattern::Random) {
    if (spec.exact_quota) {
      std::vector<std::int64_t> observed;
      observed.reserve(static_cast<std::size_t>(base.observed_count()));
      base.for_each_observed([&](int m, int n) {
        observed.push_back(static_cast<std::int64_t>(m) * base.cols() + n);
      });
      Rng rng(spec.seed);
      for (std::size_t k = observed.size(); k > 1; --k) {
        std::swap(observed[k - 1], observed[rng.below(k)]);
      }
      const auto quota = static_cast<std::size_t>(
          std::llround(spec.rate * static_cast<double>(observed.size())));
      for (std::size_t k = 0; k < observed.size(); ++k) {
        const auto lin = static_cast<std::size_t>(observed[k]);
        (k < quota ? test_grid : train_grid)[lin] = 1;
      }
    } else {
      Rng rng(spec.seed);
      base.for_each_observed([&](int m, int n) { assign(m, n, rng.uniform() < spec.rate); });
    }
  } else {
    const std::vector<std::uint8_t> fiber_to_test = draw_fiber_flags(dims, spec, base);
    const int I = dims.intervals;
    base.for_each_observed([&](int m, int n) {
      const int j = n / I;
      assign(m, n, fiber_to_test[static_cast<std::size_t>(m) * dims.days + j] != 0);
    });
  }

  MaskPair pair{ObservationMask::from_grid(base.rows(), base.cols(), train_grid),
                ObservationMask::from_grid(base.rows(), base.cols(), test_grid)};
  if (pair.train.empty() || pair.test.empty()) {
    throw std::runtime_error("generate_mask: draw produced an empty train or test set");
  }
  return pair;
}

EvalReport evaluate(const Matrix& truth, const Matrix& recovered, const ObservationMask& test) {
  if (truth.rows() != recovered.rows() || truth.cols() != recovered.cols()) {
    throw std::invalid_argument("evaluate: truth/recovered shape mismatch");
  }
  if (test.empty()) throw std::invalid_argument("evaluate: test mask is empty");

  EvalReport report;
  double abs_pct_sum = 0.0;
  double sq_sum = 0.0;
  test.for_each_observed([&](int m, int n) {
    const double y = truth(m, n);
    const double err = y - recovered(m, n);
    sq_sum += err * err;
    ++report.n_eval;
    if (std::abs(y) < kZeroTruthCutoff) {
      ++report.n_skipped_zero;
    } else {
      abs_pct_sum += std::abs(err / y);
    }
  });
  const std::int64_t n_mape = report.n_eval - report.n_skipped_zero;
  report.mape = n_mape > 0 ? abs_pct_sum / static_cast<double>(n_mape) * 100.0 : 0.0;
  report.rmse = std::sqrt(sq_sum / static_cast<double>(report.n_eval));
  return report;
}

std::vector<double> residuals(const Matrix& truth, const Matrix& recovered,
                              const ObservationMask& test) {
  if (truth.rows() != recovered.rows() || truth.cols() != recovered.cols()) {
    throw std::invalid_argument("residuals: truth/recovered shape mismatch");
  }
  if (test.empty()) throw std::invalid_argument("residuals: test mask is empty");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(test.observed_count()));
  test.for_each_observed([&](int m, int n) { out.push_back(truth(m, n) - recovered(m, n)); });
  return out;
}

std::vector<std::vector<double>> spectrum(const Tensor3& x, const TransformMatrix& phi) {
  const Tensor3 transformed = forward(x, phi);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(x.dims().days));
  for (int j = 0; j < x.dims().days; ++j) {
    Eigen::BDCSVD<Matrix> svd(transformed.slice(j));
    if (svd.info() != Eigen::Success) {
      throw std::runtime_error("spectrum: decomposition failed on slice " + std::to_string(j));
    }
    const auto& sigma = svd.singularValues();
    out[static_cast<std::size_t>(j)].assign(sigma.data(), sigma.data() + sigma.size());
  }
  return out;
}

}  // namespace lstc
