#include "lstc/cli.hpp"

#include "lstc/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

namespace lstc::cli {

namespace {

struct IoOptions {
  std::string format = "auto";  // auto | binary | csv
  int intervals = 0;
  int days = 0;

  std::optional<int> intervals_opt() const {
    return intervals > 0 ? std::optional<int>(intervals) : std::nullopt;
  }
  std::optional<int> days_opt() const {
    return days > 0 ? std::optional<int>(days) : std::nullopt;
  }
};

void add_io_options(CLI::App* cmd, IoOptions& io) {
  cmd->add_option("--format", io.format, "Input format: auto, binary or csv")
      ->check(CLI::IsMember({"auto", "binary", "csv"}));
  cmd->add_option("--intervals", io.intervals, "Time points per day (csv input)");
  cmd->add_option("--days", io.days, "Day count (csv input)");
}

Dataset load(const std::string& path, const IoOptions& io) {
  FileFormat format = FileFormat::Binary;
  if (io.format == "auto") {
    format = detect_format(path);
  } else if (io.format == "csv") {
    format = FileFormat::Delimited;
  }
  return read_matrix(path, format, io.intervals_opt(), io.days_opt());
}

FileFormat output_format(const std::string& name) {
  return name == "csv" ? FileFormat::Delimited : FileFormat::Binary;
}

std::string default_manifest_path(const std::string& primary_output) {
  return primary_output + ".manifest.json";
}

/// Indicator dataset: 1.0 on mask members, NaN elsewhere.
void write_mask_file(const std::string& path, const ObservationMask& mask, TensorDims dims,
                     FileFormat format) {
  Matrix ones = Matrix::Ones(mask.rows(), mask.cols());
  write_matrix(path, ones, mask, dims, format);
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

int run_synth(int sensors, int intervals, int days, int rank, double sigma,
              std::uint64_t seed, const std::string& out, const std::string& out_format,
              std::string manifest_path) {
  TensorDims dims(sensors, intervals, days);
  const Matrix values = synth(dims, rank, sigma, seed);
  const auto mask = ObservationMask::full(dims.sensors, static_cast<int>(dims.time_points()));
  write_matrix(out, values, mask, dims, output_format(out_format));

  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = seed;
  manifest.outputs["dataset"] = out;
  if (manifest_path.empty()) manifest_path = default_manifest_path(out);
  manifest.outputs["manifest"] = manifest_path;
  write_manifest(manifest_path, manifest);
  return 0;
}

int run_mask(const std::string& in, const IoOptions& io, const MaskSpec& spec,
             const std::string& train_out, const std::string& test_out,
             const std::string& masked_out, const std::string& out_format,
             std::string manifest_path) {
  const Dataset ds = load(in, io);
  const MaskPair split = generate_mask(ds.mask, ds.dims, spec);
  const FileFormat fmt = output_format(out_format);

  write_mask_file(train_out, split.train, ds.dims, fmt);
  write_mask_file(test_out, split.test, ds.dims, fmt);
  if (!masked_out.empty()) {
    write_matrix(masked_out, ds.values, split.train, ds.dims, fmt);
  }

  RunManifest manifest;
  manifest.command = "mask";
  manifest.seed = spec.seed;
  manifest.mask_spec = spec;
  manifest.inputs["dataset"] = in;
  manifest.outputs["train_mask"] = train_out;
  manifest.outputs["test_mask"] = test_out;
  if (!masked_out.empty()) manifest.outputs["masked_dataset"] = masked_out;
  if (manifest_path.empty()) manifest_path = default_manifest_path(train_out);
  manifest.outputs["manifest"] = manifest_path;
  write_manifest(manifest_path, manifest);
  return 0;
}

int run_impute(const std::string& in, const IoOptions& io, const SolverConfig& config,
               const std::string& out, const std::string& out_format,
               const std::string& trace_path, std::string manifest_path) {
  const Dataset ds = load(in, io);
  const SolveResult result = run(ds.values, ds.mask, ds.dims, config);

  const auto full = ObservationMask::full(ds.dims.sensors, static_cast<int>(ds.dims.time_points()));
  write_matrix(out, result.recovered, full, ds.dims, output_format(out_format));
  if (!trace_path.empty()) {
    std::ostringstream trace_text;
    result.trace.write_tsv(trace_text);
    write_file_atomic(trace_path, trace_text.str());
  }

  RunManifest manifest;
  manifest.command = "impute";
  manifest.seed = config.seed;
  manifest.solver_config = config;
  manifest.inputs["dataset"] = in;
  manifest.outputs["recovered"] = out;
  if (!trace_path.empty()) manifest.outputs["trace"] = trace_path;
  if (manifest_path.empty()) manifest_path = default_manifest_path(out);
  manifest.outputs["manifest"] = manifest_path;
  write_manifest(manifest_path, manifest);

  std::cout << "converged=" << (result.trace.converged ? "true" : "false")
            << " iterations=" << result.trace.iterations() << '\n';
  return 0;
}

int run_eval(const std::string& truth_path, const std::string& recovered_path,
             const std::string& test_mask_path, const IoOptions& io,
             const std::string& report_path, const std::string& residuals_path,
             std::string manifest_path) {
  const Dataset truth = load(truth_path, io);
  const Dataset recovered = load(recovered_path, io);
  const Dataset test = load(test_mask_path, io);
  if (truth.dims != recovered.dims || truth.dims != test.dims) {
    throw std::invalid_argument("eval: truth, recovered and test mask dims disagree");
  }
  std::int64_t uncovered = 0;
  test.mask.for_each_observed([&](int m, int n) {
    if (!truth.mask.contains(m, n)) ++uncovered;
  });
  if (uncovered > 0) {
    throw std::invalid_argument("eval: " + std::to_string(uncovered) +
                                " test entries are unobserved in the truth dataset");
  }

  const EvalReport report = evaluate(truth.values, recovered.values, test.mask);
  std::ostringstream text;
  text << "mape\t" << format_double(report.mape) << '\n'
       << "rmse\t" << format_double(report.rmse) << '\n'
       << "n_eval\t" << report.n_eval << '\n'
       << "n_skipped_zero\t" << report.n_skipped_zero << '\n';
  write_file_atomic(report_path, text.str());

  if (!residuals_path.empty()) {
    std::ostringstream res_text;
    for (double r : residuals(truth.values, recovered.values, test.mask)) {
      res_text << format_double(r) << '\n';
    }
    write_file_atomic(residuals_path, res_text.str());
  }

  RunManifest manifest;
  manifest.command = "eval";
  manifest.inputs["truth"] = truth_path;
  manifest.inputs["recovered"] = recovered_path;
  manifest.inputs["test_mask"] = test_mask_path;
  manifest.outputs["report"] = report_path;
  if (!residuals_path.empty()) manifest.outputs["residuals"] = residuals_path;
  if (manifest_path.empty()) manifest_path = default_manifest_path(report_path);
  manifest.outputs["manifest"] = manifest_path;
  write_manifest(manifest_path, manifest);

  std::cout << "mape=" << report.mape << " rmse=" << report.rmse << " n_eval=" << report.n_eval
            << '\n';
  return 0;
}

int run_spectrum(const std::string& in, const IoOptions& io, const std::string& transform,
                 const std::string& out, std::string manifest_path) {
  const Dataset ds = load(in, io);
  const Tensor3 tensor = tensorize(ds.values, ds.dims);
  TransformMatrix phi;
  switch (transform_kind_from_string(transform)) {
    case TransformKind::DataDriven: phi = fit_data_driven(tensor); break;
    case TransformKind::Dct: phi = dct_matrix(ds.dims.days); break;
    case TransformKind::Identity: phi = identity_transform(ds.dims.days); break;
  }

  std::ostringstream text;
  const auto lists = spectrum(tensor, phi);
  for (std::size_t j = 0; j < lists.size(); ++j) {
    text << j;
    for (double sigma : lists[j]) text << '\t' << format_double(sigma);
    text << '\n';
  }
  write_file_atomic(out, text.str());

  RunManifest manifest;
  manifest.command = "spectrum";
  manifest.inputs["dataset"] = in;
  manifest.outputs["spectrum"] = out;
  if (manifest_path.empty()) manifest_path = default_manifest_path(out);
  manifest.outputs["manifest"] = manifest_path;
  write_manifest(manifest_path, manifest);
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Low-tubal-rank smoothing tensor completion for spatiotemporal data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic low-tubal-rank dataset");
  int sensors = 0, intervals = 0, days = 0, rank = 1;
  double sigma = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out, synth_format = "binary", synth_manifest;
  synth_cmd->add_option("--sensors", sensors)->required();
  synth_cmd->add_option("--intervals", intervals)->required();
  synth_cmd->add_option("--days", days)->required();
  synth_cmd->add_option("--rank", rank, "Tubal rank of the generated tensor")->required();
  synth_cmd->add_option("--sigma", sigma, "Gaussian noise level");
  synth_cmd->add_option("--seed", synth_seed);
  synth_cmd->add_option("--out", synth_out)->required();
  synth_cmd->add_option("--out-format", synth_format)->check(CLI::IsMember({"binary", "csv"}));
  synth_cmd->add_option("--manifest", synth_manifest);

  // mask
  auto* mask_cmd = app.add_subcommand("mask", "Split observed entries into train/test masks");
  IoOptions mask_io;
  std::string mask_in, pattern = "rm", train_out, test_out, masked_out, mask_format = "binary",
              mask_manifest;
  MaskSpec spec;
  mask_cmd->add_option("--in", mask_in)->required();
  add_io_options(mask_cmd, mask_io);
  mask_cmd->add_option("--pattern", pattern, "rm (entries) or nm (sensor-day fibers)")
      ->check(CLI::IsMember({"rm", "nm"}));
  mask_cmd->add_option("--rate", spec.rate, "Masking probability in (0,1)")->required();
  mask_cmd->add_option("--seed", spec.seed);
  mask_cmd->add_flag("--quota", spec.exact_quota, "Draw an exact-size sample instead of i.i.d.");
  mask_cmd->add_option("--train-out", train_out)->required();
  mask_cmd->add_option("--test-out", test_out)->required();
  mask_cmd->add_option("--masked-out", masked_out, "Dataset restricted to the train mask");
  mask_cmd->add_option("--out-format", mask_format)->check(CLI::IsMember({"binary", "csv"}));
  mask_cmd->add_option("--manifest", mask_manifest);

  // impute
  auto* impute_cmd = app.add_subcommand("impute", "Recover missing entries");
  IoOptions impute_io;
  std::string impute_in, impute_out, impute_format = "binary", trace_path, impute_manifest,
              transform = "unitary";
  SolverConfig config;
  double rho_max_flag = 0.0;
  impute_cmd->add_option("--in", impute_in)->required();
  add_io_options(impute_cmd, impute_io);
  impute_cmd->add_option("--out", impute_out)->required();
  impute_cmd->add_option("--out-format", impute_format)->check(CLI::IsMember({"binary", "csv"}));
  impute_cmd->add_option("--trace", trace_path, "Per-iteration diagnostics (tsv)");
  impute_cmd->add_option("--transform", transform, "unitary, dct or identity")
      ->check(CLI::IsMember({"unitary", "dct", "identity"}));
  impute_cmd->add_option("--rho0", config.rho0, "Initial ADMM penalty")->required();
  impute_cmd->add_option("--rho-max", rho_max_flag, "Penalty cap (default 1e5*rho0)");
  impute_cmd->add_option("--lambda-coef", config.lambda_coef,
                         "Smoothing weight as a multiple of rho; 0 disables smoothing");
  impute_cmd->add_option("--epsilon", config.epsilon, "Convergence threshold");
  impute_cmd->add_option("--max-iters", config.max_iters);
  impute_cmd->add_option("--refresh", config.phi_refresh_period,
                         "Refit the unitary transform every N iterations (0 = never)");
  impute_cmd->add_option("--seed", config.seed);
  impute_cmd->add_option("--manifest", impute_manifest);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score a recovery against held-out truth");
  IoOptions eval_io;
  std::string truth_path, recovered_path, test_mask_path, report_path, residuals_path,
      eval_manifest;
  eval_cmd->add_option("--truth", truth_path)->required();
  eval_cmd->add_option("--recovered", recovered_path)->required();
  eval_cmd->add_option("--test-mask", test_mask_path)->required();
  add_io_options(eval_cmd, eval_io);
  eval_cmd->add_option("--report", report_path)->required();
  eval_cmd->add_option("--residuals", residuals_path, "Per-entry truth minus recovered dump");
  eval_cmd->add_option("--manifest", eval_manifest);

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Per-day singular values in the transformed domain");
  IoOptions spectrum_io;
  std::string spectrum_in, spectrum_transform = "unitary", spectrum_out, spectrum_manifest;
  spectrum_cmd->add_option("--in", spectrum_in)->required();
  add_io_options(spectrum_cmd, spectrum_io);
  spectrum_cmd->add_option("--transform", spectrum_transform)
      ->check(CLI::IsMember({"unitary", "dct", "identity"}));
  spectrum_cmd->add_option("--out", spectrum_out)->required();
  spectrum_cmd->add_option("--manifest", spectrum_manifest);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      return run_synth(sensors, intervals, days, rank, sigma, synth_seed, synth_out,
                       synth_format, synth_manifest);
    }
    if (mask_cmd->parsed()) {
      spec.pattern = pattern_from_string(pattern);
      return run_mask(mask_in, mask_io, spec, train_out, test_out, masked_out, mask_format,
                      mask_manifest);
    }
    if (impute_cmd->parsed()) {
      config.transform = transform_kind_from_string(transform);
      if (rho_max_flag > 0.0) config.rho_max = rho_max_flag;
      return run_impute(impute_in, impute_io, config, impute_out, impute_format, trace_path,
                        impute_manifest);
    }
    if (eval_cmd->parsed()) {
      return run_eval(truth_path, recovered_path, test_mask_path, eval_io, report_path,
                      residuals_path, eval_manifest);
    }
    if (spectrum_cmd->parsed()) {
      return run_spectrum(spectrum_in, spectrum_io, spectrum_transform, spectrum_out,
                          spectrum_manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "lstc: error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "lstc: no subcommand given\n";
  return 1;
}

}  // namespace lstc::cli
