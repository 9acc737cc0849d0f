#include "lstc/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace lstc {

void SolverConfig::validate() const {
  if (!(rho0 > 0.0)) throw std::invalid_argument("SolverConfig: rho0 must be positive");
  if (!(resolved_rho_max() >= rho0)) {
    throw std::invalid_argument("SolverConfig: rho_max must be >= rho0");
  }
  if (!(rho_growth >= 1.0)) throw std::invalid_argument("SolverConfig: rho_growth must be >= 1");
  if (lambda_coef < 0.0) throw std::invalid_argument("SolverConfig: lambda_coef must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (phi_refresh_period < 0) {
    throw std::invalid_argument("SolverConfig: phi_refresh_period must be >= 0");
  }
}

SolverState initialize(const Matrix& y, const ObservationMask& mask, TensorDims dims,
                       const SolverConfig& config) {
  config.validate();
  if (y.rows() != dims.sensors || y.cols() != dims.time_points()) {
    throw std::invalid_argument("initialize: data shape does not match dims");
  }
  if (mask.empty()) {
    throw std::invalid_argument("initialize: observation mask is empty, nothing to impute from");
  }

  SolverState state;
  state.dims = dims;
  state.z = project(y, mask);
  if (!state.z.allFinite()) {
    throw std::invalid_argument("initialize: observed entries contain non-finite values");
  }
  state.x = Tensor3(dims);
  state.dual = Tensor3(dims);
  state.rho = config.rho0;
  state.iteration = 0;
  switch (config.transform) {
    case TransformKind::DataDriven:
      state.phi = fit_data_driven(tensorize(state.z, dims));
      break;
    case TransformKind::Dct:
      state.phi = dct_matrix(dims.days);
      break;
    case TransformKind::Identity:
      state.phi = identity_transform(dims.days);
      break;
  }
  return state;
}

Tensor3 update_x(const SolverState& state, std::vector<SvtReport>* reports) {
  Tensor3 shifted = tensorize(state.z, state.dims);
  shifted -= state.dual * (1.0 / state.rho);
  return tensor_svt(shifted, state.phi, 1.0 / state.rho, reports);
}

Matrix update_z(const SolverState& state, const Matrix& y, const ObservationMask& mask,
                const SolverConfig& config, const SmoothingSystem* cached_system) {
  Tensor3 shifted = state.x;
  shifted += state.dual * (1.0 / state.rho);
  Matrix z = matricize(shifted);
  if (config.lambda_coef > 0.0) {
    // alpha = rho / lambda = 1 / lambda_coef, independent of the rho schedule.
    if (cached_system != nullptr) {
      z = solve_smoothing(z, *cached_system);
    } else {
      z = solve_smoothing(z, build_system(static_cast<int>(z.cols()), 1.0 / config.lambda_coef));
    }
  }
  return overwrite_observed(z, y, mask);
}

Tensor3 update_dual(const SolverState& state) {
  Tensor3 residual = state.x;
  residual -= tensorize(state.z, state.dims);
  residual *= state.rho;
  return state.dual + residual;
}

double convergence_metric(const Matrix& x_new, const Matrix& x_old, const Matrix& y,
                          const ObservationMask& mask) {
  const double observed_sq = project(y, mask).squaredNorm();
  if (!(observed_sq > 0.0)) {
    throw std::invalid_argument("convergence_metric: observed entries have zero norm");
  }
  return (x_new - x_old).squaredNorm() / observed_sq;
}

void SolverTrace::write_tsv(std::ostream& os) const {
  os << "iteration\trho\tmetric\tnuclear_norm\tquad_variation\twall_ms\tranks\n";
  for (const auto& rec : records) {
    os << rec.iteration << '\t' << rec.rho << '\t' << rec.metric << '\t' << rec.nuclear_norm
       << '\t' << rec.quad_variation << '\t' << rec.wall_ms << '\t';
    for (std::size_t k = 0; k < rec.ranks.size(); ++k) {
      if (k > 0) os << ',';
      os << rec.ranks[k];
    }
    os << '\n';
  }
  os << "# converged\t" << (converged ? "true" : "false") << '\n';
}

SolveResult run(const Matrix& y, const ObservationMask& mask, TensorDims dims,
                const SolverConfig& config) {
  using Clock = std::chrono::steady_clock;

  SolverState state = initialize(y, mask, dims, config);
  const double observed_sq = project(y, mask).squaredNorm();
  if (!(observed_sq > 0.0)) {
    throw std::invalid_argument("run: observed entries have zero norm");
  }
  const double rho_cap = config.resolved_rho_max();

  SmoothingSystem system;
  if (config.lambda_coef > 0.0) {
    system = build_system(static_cast<int>(dims.time_points()), 1.0 / config.lambda_coef);
  }

  SolverTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.max_iters));
  // Change-metric baseline: the observed matrix, which is what the recovered
  // matrix approximates at iteration zero. A zero baseline would report
  // spurious convergence whenever the first shrink truncates everything.
  Matrix recovered_prev = state.z;
  Matrix recovered;
  std::vector<SvtReport> reports;

  while (state.iteration < config.max_iters) {
    const auto started = Clock::now();
    const int iter = state.iteration + 1;
    state.rho = std::min(config.rho_growth * state.rho, rho_cap);

    if (config.transform == TransformKind::DataDriven && config.phi_refresh_period > 0 &&
        iter % config.phi_refresh_period == 0) {
      Tensor3 basis_input = tensorize(state.z, dims);
      basis_input -= state.dual * (1.0 / state.rho);
      state.phi = fit_data_driven(basis_input);
    }

    state.x = update_x(state, &reports);
    state.z = update_z(state, y, mask, config, config.lambda_coef > 0.0 ? &system : nullptr);
    state.dual = update_dual(state);
    state.iteration = iter;

    recovered = matricize(state.x);
    const double metric = (recovered - recovered_prev).squaredNorm() / observed_sq;

    IterationRecord rec;
    rec.iteration = iter;
    rec.rho = state.rho;
    rec.metric = metric;
    rec.quad_variation = quadratic_variation(state.z);
    rec.ranks.reserve(reports.size());
    for (const auto& rep : reports) {
      rec.nuclear_norm += rep.nuclear_norm;
      rec.ranks.push_back(rep.retained_rank);
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    trace.records.push_back(std::move(rec));

    if (!std::isfinite(metric) || !recovered.allFinite() || !state.z.allFinite()) {
      std::ostringstream msg;
      msg << "run: non-finite values at iteration " << iter << " (rho=" << state.rho << ")";
      throw std::runtime_error(msg.str());
    }

    recovered_prev = recovered;
    if (metric < config.epsilon) {
      trace.converged = true;
      break;
    }
  }

  return {std::move(recovered_prev), std::move(trace)};
}

}  // namespace lstc
