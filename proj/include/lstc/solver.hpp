#pragma once

#include "lstc/mask.hpp"
#include "lstc/proximal.hpp"
#include "lstc/smoothing.hpp"
#include "lstc/transforms.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace lstc {

/// Hyperparameters of the ADMM imputation loop. The smoothing weight is tied
/// to the penalty parameter as lambda = lambda_coef * rho, so the smoothing
/// system depends only on lambda_coef; lambda_coef = 0 disables smoothing.
struct SolverConfig {
  double rho0 = 1e-4;
  std::optional<double> rho_max;  // defaults to 1e5 * rho0
  double rho_growth = 1.05;
  double lambda_coef = 0.001;
  double epsilon = 1e-3;
  int max_iters = 200;
  int phi_refresh_period = 10;    // 0 disables refresh
  TransformKind transform = TransformKind::DataDriven;
  std::uint64_t seed = 0;         // recorded in manifests; the solve is deterministic

  double resolved_rho_max() const { return rho_max.value_or(1e5 * rho0); }
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

struct SolverState {
  TensorDims dims;
  Tensor3 x;            // low-rank tensor iterate
  Matrix z;             // smoothed matrix iterate, equals y on observed entries
  Tensor3 dual;
  double rho = 0.0;
  TransformMatrix phi;
  int iteration = 0;    // completed iterations
};

struct IterationRecord {
  int iteration = 0;          // 1-based
  double rho = 0.0;
  double metric = 0.0;        // squared-change ratio tested against epsilon
  double nuclear_norm = 0.0;  // sum of shrunk singular values over all slices
  double quad_variation = 0.0;
  double wall_ms = 0.0;
  std::vector<int> ranks;     // retained rank per frontal slice
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  bool converged = false;

  int iterations() const { return static_cast<int>(records.size()); }
  void write_tsv(std::ostream& os) const;
};

/// Zero dual and low-rank iterates, z = observed values (zeros elsewhere),
/// transform fitted per config. Refuses an empty mask.
SolverState initialize(const Matrix& y, const ObservationMask& mask, TensorDims dims,
                       const SolverConfig& config);

/// Low-rank step: tensor SVT of Q(z) - dual/rho with threshold 1/rho.
Tensor3 update_x(const SolverState& state, std::vector<SvtReport>* reports = nullptr);

/// Smoothing step applied to Q^-1(x + dual/rho), with observed entries then
/// reset from y. lambda_coef = 0 skips the smoothing solve.
Matrix update_z(const SolverState& state, const Matrix& y, const ObservationMask& mask,
                const SolverConfig& config, const SmoothingSystem* cached_system = nullptr);

/// dual + rho * (x - Q(z)).
Tensor3 update_dual(const SolverState& state);

/// ||x_new - x_old||_F^2 / ||P_Omega(y)||_F^2.
double convergence_metric(const Matrix& x_new, const Matrix& x_old, const Matrix& y,
                          const ObservationMask& mask);

struct SolveResult {
  Matrix recovered;
  SolverTrace trace;
};

/// Full ADMM loop: per iteration, grow rho (capped), optionally refresh the
/// data-driven transform from Q(z) - dual/rho every phi_refresh_period
/// iterations, then the x, z and dual updates. Stops when the convergence
/// metric drops below epsilon or max_iters is reached.
SolveResult run(const Matrix& y, const ObservationMask& mask, TensorDims dims,
                const SolverConfig& config);

}  // namespace lstc
