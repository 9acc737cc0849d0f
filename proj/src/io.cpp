#include "lstc/io.hpp"

#include "lstc/random.hpp"

#include "json.hpp"

#include <Eigen/QR>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "binary dataset i/o assumes a little-endian host");

namespace lstc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'L', 'S', 'T', 'C', 'D', 'A', 'T', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(sizeof(DatasetHeader) == 16 && std::is_trivially_copyable_v<DatasetHeader>,
              "header must match the on-disk layout");

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

class AtomicFile {
 public:
  AtomicFile(const std::string& path, std::ios::openmode mode)
      : path_(path), tmp_(path + ".tmp"), stream_(tmp_, mode | std::ios::trunc) {
    if (!stream_) fail(tmp_, "cannot open for writing");
  }
  ~AtomicFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ofstream& stream() { return stream_; }
  void commit() {
    stream_.close();
    if (!stream_) fail(tmp_, "write failed");
    fs::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream stream_;
  bool committed_ = false;
};

Dataset make_dataset(Matrix values, std::vector<std::uint8_t> grid, TensorDims dims) {
  ObservationMask mask =
      ObservationMask::from_grid(dims.sensors, static_cast<int>(dims.time_points()), grid);
  return Dataset{std::move(values), std::move(mask), dims};
}

Dataset read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");

  char magic[8];
  DatasetHeader header;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    fail(path, "not a recognized binary dataset (bad magic)");
  }
  if (header.version != kFormatVersion) fail(path, "unsupported format version");
  if (header.sensors == 0 || header.intervals == 0 || header.days == 0) {
    fail(path, "zero dimension in header");
  }

  TensorDims dims(static_cast<int>(header.sensors), static_cast<int>(header.intervals),
                  static_cast<int>(header.days));
  const std::int64_t T = dims.time_points();
  const auto payload = static_cast<std::uintmax_t>(dims.element_count()) * sizeof(double);
  if (fs::file_size(path) != sizeof(magic) + sizeof(header) + payload) {
    fail(path, "payload length does not match header dimensions");
  }

  Matrix values(dims.sensors, T);
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(dims.element_count()), 0);
  std::vector<double> row(static_cast<std::size_t>(T));
  for (int m = 0; m < dims.sensors; ++m) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(T * sizeof(double)));
    if (!in) fail(path, "truncated payload");
    for (std::int64_t t = 0; t < T; ++t) {
      if (std::isnan(row[static_cast<std::size_t>(t)])) {
        values(m, t) = 0.0;
      } else {
        values(m, t) = row[static_cast<std::size_t>(t)];
        grid[static_cast<std::size_t>(m) * T + t] = 1;
      }
    }
  }
  return make_dataset(std::move(values), std::move(grid), dims);
}

Dataset read_delimited(const std::string& path, std::optional<int> intervals,
                       std::optional<int> days) {
  if (!intervals || !days) {
    fail(path, "delimited input needs explicit --intervals and --days");
  }
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> cells;
    const char* cursor = line.c_str();
    while (true) {
      char* end = nullptr;
      const double value = std::strtod(cursor, &end);
      if (end == cursor) {
        fail(path, "non-numeric cell at line " + std::to_string(line_no));
      }
      cells.push_back(value);
      cursor = end;
      while (*cursor == ' ' || *cursor == '\t' || *cursor == '\r') ++cursor;
      if (*cursor == '\0') break;
      if (*cursor != ',') fail(path, "malformed separator at line " + std::to_string(line_no));
      ++cursor;
    }
    if (!rows.empty() && cells.size() != rows.front().size()) {
      fail(path, "ragged row at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) fail(path, "no data rows");

  TensorDims dims(static_cast<int>(rows.size()), *intervals, *days);
  const std::int64_t T = dims.time_points();
  if (static_cast<std::int64_t>(rows.front().size()) != T) {
    fail(path, "column count " + std::to_string(rows.front().size()) +
                   " does not equal intervals*days = " + std::to_string(T));
  }

  Matrix values(dims.sensors, T);
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(dims.element_count()), 0);
  for (int m = 0; m < dims.sensors; ++m) {
    for (std::int64_t t = 0; t < T; ++t) {
      const double v = rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
      if (std::isnan(v)) {
        values(m, t) = 0.0;
      } else {
        values(m, t) = v;
        grid[static_cast<std::size_t>(m) * T + t] = 1;
      }
    }
  }
  return make_dataset(std::move(values), std::move(grid), dims);
}

}  // namespace

FileFormat detect_format(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  return (in && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0) ? FileFormat::Binary
                                                                 : FileFormat::Delimited;
}

Dataset read_matrix(const std::string& path, FileFormat format, std::optional<int> intervals,
                    std::optional<int> days) {
  Dataset ds = format == FileFormat::Binary ? read_binary(path)
                                            : read_delimited(path, intervals, days);
  if (format == FileFormat::Binary && intervals && days &&
      (*intervals != ds.dims.intervals || *days != ds.dims.days)) {
    fail(path, "header dims disagree with --intervals/--days flags");
  }
  return ds;
}

void write_matrix(const std::string& path, const Matrix& values, const ObservationMask& mask,
                  TensorDims dims, FileFormat format) {
  const std::int64_t T = dims.time_points();
  if (values.rows() != dims.sensors || values.cols() != T) {
    throw std::invalid_argument("write_matrix: value shape does not match dims");
  }
  if (mask.rows() != dims.sensors || mask.cols() != T) {
    throw std::invalid_argument("write_matrix: mask shape does not match dims");
  }

  if (format == FileFormat::Binary) {
    AtomicFile out(path, std::ios::binary);
    out.stream().write(kMagic, sizeof(kMagic));
    const DatasetHeader header{kFormatVersion, static_cast<std::uint32_t>(dims.sensors),
                               static_cast<std::uint32_t>(dims.intervals),
                               static_cast<std::uint32_t>(dims.days)};
    out.stream().write(reinterpret_cast<const char*>(&header), sizeof(header));
    std::vector<double> row(static_cast<std::size_t>(T));
    for (int m = 0; m < dims.sensors; ++m) {
      for (std::int64_t t = 0; t < T; ++t) {
        row[static_cast<std::size_t>(t)] =
            mask.contains(m, static_cast<int>(t)) ? values(m, t)
                                                  : std::numeric_limits<double>::quiet_NaN();
      }
      out.stream().write(reinterpret_cast<const char*>(row.data()),
                         static_cast<std::streamsize>(T * sizeof(double)));
    }
    out.commit();
  } else {
    AtomicFile out(path, std::ios::out);
    char buffer[40];
    for (int m = 0; m < dims.sensors; ++m) {
      for (std::int64_t t = 0; t < T; ++t) {
        const double v = mask.contains(m, static_cast<int>(t))
                             ? values(m, t)
                             : std::numeric_limits<double>::quiet_NaN();
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        if (t > 0) out.stream() << ',';
        out.stream() << buffer;
      }
      out.stream() << '\n';
    }
    out.commit();
  }
}

Matrix synth(TensorDims dims, int tubal_rank, double noise_sigma, std::uint64_t seed,
             TransformMatrix* generator) {
  const int rank_bound = std::min(dims.sensors, dims.intervals);
  if (tubal_rank < 1 || tubal_rank > rank_bound) {
    throw std::invalid_argument("synth: tubal_rank must lie in [1, min(sensors, intervals)]");
  }
  if (noise_sigma < 0.0) throw std::invalid_argument("synth: noise_sigma must be >= 0");

  Rng rng(seed);
  const int J = dims.days;

  // Seeded random orthogonal day-mode basis, sign-fixed for determinism.
  Matrix gauss(J, J);
  for (int c = 0; c < J; ++c) {
    for (int r = 0; r < J; ++r) gauss(r, c) = rng.gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix basis = qr.householderQ();
  const Matrix r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < J; ++c) {
    if (r_factor(c, c) < 0.0) basis.col(c) = -basis.col(c);
  }
  TransformMatrix hidden{basis, TransformKind::DataDriven, false};
  if (generator != nullptr) *generator = hidden;

  // Rank-bounded slices in the transformed domain. Slice energies decay
  // geometrically so the day Gram matrix has separated eigenvalues and the
  // hidden basis is identifiable, as it is for real daily data.
  Tensor3 transformed(dims);
  Matrix left(dims.sensors, tubal_rank);
  Matrix right(dims.intervals, tubal_rank);
  double scale = 1.0 / std::sqrt(static_cast<double>(tubal_rank));
  for (int j = 0; j < J; ++j) {
    for (int c = 0; c < tubal_rank; ++c) {
      for (int r = 0; r < dims.sensors; ++r) left(r, c) = rng.gaussian();
    }
    for (int c = 0; c < tubal_rank; ++c) {
      for (int r = 0; r < dims.intervals; ++r) right(r, c) = rng.gaussian();
    }
    transformed.slice(j) = left * right.transpose() * scale;
    scale *= 0.8;
  }

  Tensor3 x = inverse(transformed, hidden);
  if (noise_sigma > 0.0) {
    for (std::int64_t k = 0; k < x.size(); ++k) {
      x.data()[k] += noise_sigma * rng.gaussian();
    }
  }
  return matricize(x);
}

const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::DataDriven: return "unitary";
    case TransformKind::Dct: return "dct";
    case TransformKind::Identity: return "identity";
  }
  throw std::logic_error("unknown transform kind");
}

TransformKind transform_kind_from_string(const std::string& name) {
  if (name == "unitary") return TransformKind::DataDriven;
  if (name == "dct") return TransformKind::Dct;
  if (name == "identity") return TransformKind::Identity;
  throw std::invalid_argument("unknown transform kind: " + name);
}

const char* to_string(MissingPattern pattern) {
  return pattern == MissingPattern::Random ? "rm" : "nm";
}

MissingPattern pattern_from_string(const std::string& name) {
  if (name == "rm") return MissingPattern::Random;
  if (name == "nm") return MissingPattern::NonRandom;
  throw std::invalid_argument("unknown missing pattern: " + name);
}

namespace {

json mask_spec_to_json(const MaskSpec& spec) {
  return json{{"pattern", to_string(spec.pattern)},
              {"rate", spec.rate},
              {"seed", spec.seed},
              {"exact_quota", spec.exact_quota}};
}

MaskSpec mask_spec_from_json(const json& j) {
  MaskSpec spec;
  spec.pattern = pattern_from_string(j.at("pattern").get<std::string>());
  spec.rate = j.at("rate").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.exact_quota = j.at("exact_quota").get<bool>();
  return spec;
}

json solver_config_to_json(const SolverConfig& config) {
  json j{{"rho0", config.rho0},
         {"rho_growth", config.rho_growth},
         {"lambda_coef", config.lambda_coef},
         {"epsilon", config.epsilon},
         {"max_iters", config.max_iters},
         {"phi_refresh_period", config.phi_refresh_period},
         {"transform", to_string(config.transform)},
         {"seed", config.seed}};
  if (config.rho_max) {
    j["rho_max"] = *config.rho_max;
  } else {
    j["rho_max"] = nullptr;
  }
  return j;
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig config;
  config.rho0 = j.at("rho0").get<double>();
  if (!j.at("rho_max").is_null()) config.rho_max = j.at("rho_max").get<double>();
  config.rho_growth = j.at("rho_growth").get<double>();
  config.lambda_coef = j.at("lambda_coef").get<double>();
  config.epsilon = j.at("epsilon").get<double>();
  config.max_iters = j.at("max_iters").get<int>();
  config.phi_refresh_period = j.at("phi_refresh_period").get<int>();
  config.transform = transform_kind_from_string(j.at("transform").get<std::string>());
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

}  // namespace

std::string manifest_to_json(const RunManifest& manifest) {
  json j{{"tool", "lstc"},
         {"tool_version", manifest.tool_version},
         {"command", manifest.command},
         {"inputs", manifest.inputs},
         {"outputs", manifest.outputs},
         {"seed", manifest.seed},
         {"mask_spec", nullptr},
         {"solver_config", nullptr}};
  if (manifest.mask_spec) j["mask_spec"] = mask_spec_to_json(*manifest.mask_spec);
  if (manifest.solver_config) j["solver_config"] = solver_config_to_json(*manifest.solver_config);
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunManifest manifest;
  manifest.command = j.at("command").get<std::string>();
  manifest.tool_version = j.at("tool_version").get<std::string>();
  manifest.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  manifest.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  manifest.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("mask_spec").is_null()) manifest.mask_spec = mask_spec_from_json(j.at("mask_spec"));
  if (!j.at("solver_config").is_null()) {
    manifest.solver_config = solver_config_from_json(j.at("solver_config"));
  }
  return manifest;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  write_file_atomic(path, manifest_to_json(manifest));
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
  AtomicFile out(path, std::ios::out | std::ios::binary);
  out.stream().write(content.data(), static_cast<std::streamsize>(content.size()));
  out.commit();
}

}  // namespace lstc
