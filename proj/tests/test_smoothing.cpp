#include "doctest.h"

#include "property_checks.hpp"
#include "test_support.hpp"

#include "lstc/smoothing.hpp"

using namespace lstc;

TEST_SUITE_BEGIN("smoothing");

TEST_CASE("quadratic variation of constant columns is zero") {
  Matrix z(3, 5);
  z.colwise() = Eigen::Vector3d(1.0, -2.0, 0.5);
  CHECK(quadratic_variation(z) == 0.0);
}

TEST_CASE("quadratic variation by hand") {
  Matrix z(1, 3);
  z << 0.0, 1.0, 3.0;
  CHECK(quadratic_variation(z) == doctest::Approx(5.0));
  CHECK(quadratic_variation(Matrix::Zero(4, 1)) == 0.0);
}

TEST_CASE("column-difference sum equals the matrix-operator form") {
  Rng rng(41);
  const Matrix z = testsupport::random_matrix(rng, 3, 6);
  Matrix psi = Matrix::Zero(5, 6);
  for (int t = 0; t < 5; ++t) {
    psi(t, t) = -1.0;
    psi(t, t + 1) = 1.0;
  }
  const double via_operator = (psi * z.transpose()).squaredNorm();
  CHECK(quadratic_variation(z) == doctest::Approx(via_operator).epsilon(1e-12));
}

TEST_CASE("system coefficients match the hand build") {
  SUBCASE("length one collapses to alpha") {
    const SmoothingSystem sys = build_system(1, 0.7);
    REQUIRE(sys.diag.size() == 1);
    CHECK(sys.diag[0] == doctest::Approx(0.7));
    CHECK(sys.upper_factors.size() == 0);
  }
  SUBCASE("length three") {
    const SmoothingSystem sys = build_system(3, 1.0);
    REQUIRE(sys.diag.size() == 3);
    CHECK(sys.diag[0] == doctest::Approx(2.0));
    CHECK(sys.diag[1] == doctest::Approx(3.0));
    CHECK(sys.diag[2] == doctest::Approx(2.0));
  }
  SUBCASE("dense expansion at length five") {
    const SmoothingSystem sys = build_system(5, 0.3);
    Matrix psi = Matrix::Zero(4, 5);
    for (int t = 0; t < 4; ++t) {
      psi(t, t) = -1.0;
      psi(t, t + 1) = 1.0;
    }
    const Matrix normal = psi.transpose() * psi + 0.3 * Matrix::Identity(5, 5);
    for (int t = 0; t < 5; ++t) CHECK(sys.diag[t] == doctest::Approx(normal(t, t)));
    CHECK(normal(0, 1) == doctest::Approx(-1.0));
    CHECK(normal(3, 4) == doctest::Approx(-1.0));
    CHECK(normal(0, 2) == 0.0);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(build_system(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_system(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_system(3, -1.0), std::invalid_argument);
  }
}

TEST_CASE("constant columns are a fixed point of the solve") {
  Matrix b(2, 6);
  b.row(0).setConstant(3.0);
  b.row(1).setConstant(-1.5);
  const Matrix z = solve_smoothing(b, build_system(6, 2.0));
  CHECK((z - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-point hand solve") {
  Matrix b(1, 2);
  b << 0.0, 2.0;
  const Matrix z = solve_smoothing(b, build_system(2, 1.0));
  CHECK(z(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(z(0, 1) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("matches the dense-inverse formula") {
  Rng rng(42);
  const Matrix b = testsupport::random_matrix(rng, 4, 7);
  const double alpha = 0.37;
  const Matrix z = solve_smoothing(b, build_system(7, alpha));

  Matrix psi = Matrix::Zero(6, 7);
  for (int t = 0; t < 6; ++t) {
    psi(t, t) = -1.0;
    psi(t, t + 1) = 1.0;
  }
  const Matrix normal = psi.transpose() * psi + alpha * Matrix::Identity(7, 7);
  const Matrix dense = alpha * b * normal.inverse();
  CHECK((z - dense).norm() < 1e-10);

  // Residual of the defining equation.
  CHECK((z * normal - alpha * b).norm() <= 1e-8 * (alpha * b).norm());
}

TEST_CASE("column count mismatch is rejected") {
  const SmoothingSystem sys = build_system(5, 1.0);
  CHECK_THROWS_AS(solve_smoothing(Matrix::Zero(2, 4), sys), std::invalid_argument);
}

TEST_CASE("module invariants hold over random instances") {
  const auto summary = props::smoothing(200, 20250804);
  for (const auto& msg : summary.failures) FAIL_CHECK(msg);
  CHECK(summary.cases >= 200);
  CHECK(summary.ok());
}

TEST_SUITE_END();
