#include "doctest.h"

#include "property_checks.hpp"
#include "test_support.hpp"

#include "lstc/transforms.hpp"

#include <cmath>

using namespace lstc;

namespace {

TransformMatrix walsh2() {
  Matrix w(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  w << s, s, s, -s;
  return {w, TransformKind::DataDriven, false};
}

}  // namespace

TEST_SUITE_BEGIN("transforms");

TEST_CASE("identity transform is a no-op") {
  Rng rng(21);
  const Tensor3 x = testsupport::random_tensor(rng, {3, 4, 5});
  const TransformMatrix id = identity_transform(5);
  CHECK(testsupport::max_abs_diff(forward(x, id), x) == 0.0);
  CHECK(testsupport::max_abs_diff(inverse(x, id), x) == 0.0);
}

TEST_CASE("two-day orthogonal mix combines the slices") {
  Rng rng(22);
  const TensorDims dims(3, 2, 2);
  const Tensor3 x = testsupport::random_tensor(rng, dims);
  const Matrix a = x.slice(0), b = x.slice(1);

  const Tensor3 fwd = forward(x, walsh2());
  const double s = 1.0 / std::numbers::sqrt2;
  CHECK((fwd.slice(0) - s * (a + b)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((fwd.slice(1) - s * (a - b)).cwiseAbs().maxCoeff() < 1e-14);

  const Tensor3 back = inverse(fwd, walsh2());
  CHECK((back.slice(0) - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back.slice(1) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("forward preserves the norm for a random orthogonal basis") {
  Rng rng(23);
  const Tensor3 x = testsupport::random_tensor(rng, {4, 3, 6});
  const TransformMatrix phi{testsupport::random_orthogonal(rng, 6), TransformKind::DataDriven,
                            false};
  const double norm = x.frobenius_norm();
  CHECK(forward(x, phi).frobenius_norm() == doctest::Approx(norm).epsilon(1e-12));
  CHECK(testsupport::max_abs_diff(inverse(forward(x, phi), phi), x) < 1e-10 * (1.0 + norm));
}

TEST_CASE("order mismatch is rejected") {
  Rng rng(24);
  const Tensor3 x = testsupport::random_tensor(rng, {2, 2, 3});
  CHECK_THROWS_AS(forward(x, identity_transform(4)), std::invalid_argument);
  CHECK_THROWS_AS(inverse(x, dct_matrix(2)), std::invalid_argument);
}

TEST_CASE("fitted basis aligns orthogonal day rows by descending norm") {
  // Mode-3 unfolding rows: day 0 has norm 2, day 1 norm 3, day 2 norm 1,
  // mutually orthogonal. The basis must order them 1, 0, 2 with positive sign.
  const TensorDims dims(2, 2, 3);
  Tensor3 x(dims);
  x(0, 0, 0) = 2.0;
  x(1, 0, 1) = 3.0;
  x(0, 1, 2) = 1.0;
  const TransformMatrix phi = fit_data_driven(x);

  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 0) = 1.0;  // strongest day first
  expected(0, 1) = 1.0;
  expected(2, 2) = 1.0;
  CHECK((phi.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(phi.degenerate);
}

TEST_CASE("fitting an all-zero tensor falls back to the identity") {
  const TransformMatrix phi = fit_data_driven(Tensor3(TensorDims(3, 3, 4)));
  CHECK(phi.degenerate);
  CHECK((phi.entries - Matrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("fitted basis diagonalizes the day Gram matrix") {
  Rng rng(25);
  const TensorDims dims(4, 5, 6);
  const Tensor3 x = testsupport::random_tensor(rng, dims);
  const TransformMatrix phi = fit_data_driven(x);

  const Matrix unfolding = unfold(x, 3);
  const Matrix gram = unfolding * unfolding.transpose();
  const Matrix rotated = phi.entries.transpose() * gram * phi.entries;
  Matrix off = rotated;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-8 * gram.norm());

  // Descending diagonal.
  for (int j = 0; j + 1 < dims.days; ++j) {
    CHECK(rotated(j, j) >= rotated(j + 1, j + 1) - 1e-10);
  }
}

TEST_CASE("cosine basis matches the closed form at small orders") {
  const TransformMatrix c1 = dct_matrix(1);
  CHECK(c1.entries(0, 0) == doctest::Approx(1.0));

  const TransformMatrix c2 = dct_matrix(2);
  const double s = 1.0 / std::numbers::sqrt2;
  CHECK(c2.entries(0, 0) == doctest::Approx(s));
  CHECK(c2.entries(1, 0) == doctest::Approx(s));
  CHECK(c2.entries(0, 1) == doctest::Approx(s));
  CHECK(c2.entries(1, 1) == doctest::Approx(-s));

  const TransformMatrix c8 = dct_matrix(8);
  const Matrix gram = c8.entries.transpose() * c8.entries;
  CHECK((gram - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(dct_matrix(0), std::invalid_argument);
}

TEST_CASE("cosine transform concentrates a constant day profile in slice 0") {
  // A tensor that repeats the same slice every day is pure "DC" along days:
  // the analysis direction must put all energy into the first transformed
  // slice.
  Rng rng(26);
  const TensorDims dims(3, 4, 7);
  Tensor3 x(dims);
  const Matrix day = testsupport::random_matrix(rng, 3, 4);
  for (int j = 0; j < dims.days; ++j) x.slice(j) = day;

  const Tensor3 fwd = forward(x, dct_matrix(7));
  CHECK(fwd.slice(0).norm() == doctest::Approx(std::sqrt(7.0) * day.norm()).epsilon(1e-12));
  for (int j = 1; j < dims.days; ++j) {
    CHECK(fwd.slice(j).norm() < 1e-12 * day.norm());
  }
}

TEST_CASE("module invariants hold over random instances") {
  const auto summary = props::transforms(200, 20250802);
  for (const auto& msg : summary.failures) FAIL_CHECK(msg);
  CHECK(summary.cases >= 200);
  CHECK(summary.ok());
}

TEST_SUITE_END();
