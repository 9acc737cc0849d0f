#pragma once

#include "lstc/evaluation.hpp"
#include "lstc/mask.hpp"
#include "lstc/solver.hpp"
#include "lstc/tensor.hpp"

#include <map>
#include <optional>
#include <string>

namespace lstc {

inline constexpr const char* kToolVersion = "0.1.0";

enum class FileFormat { Binary, Delimited };

/// Header of the binary dataset format: 8-byte magic, then version and the
/// three tensor sizes as little-endian uint32, followed by sensors*intervals*days
/// IEEE float64 values (little-endian, row-major by (sensor, time)).
/// Missing entries are stored as NaN.
struct DatasetHeader {
  std::uint32_t version = 1;
  std::uint32_t sensors = 0;
  std::uint32_t intervals = 0;
  std::uint32_t days = 0;
};

struct Dataset {
  Matrix values;          // zero-filled where unobserved
  ObservationMask mask;
  TensorDims dims;
};

/// Reads a dataset. Binary files carry their dims; delimited files need
/// intervals/days supplied (sensors and T come from the grid itself).
/// NaN cells become unobserved: excluded from the mask and zero-filled.
Dataset read_matrix(const std::string& path, FileFormat format,
                    std::optional<int> intervals = std::nullopt,
                    std::optional<int> days = std::nullopt);

/// Inverse of read_matrix; unobserved entries are written as NaN. The file
/// appears atomically (temporary + rename).
void write_matrix(const std::string& path, const Matrix& values, const ObservationMask& mask,
                  TensorDims dims, FileFormat format);

/// Sniffs binary vs delimited by the magic bytes.
FileFormat detect_format(const std::string& path);

/// Generates a matrix whose tensorization has every frontal slice of rank at
/// most tubal_rank under a seeded hidden orthogonal day-mode transform, plus
/// optional white noise. The hidden transform is returned through generator
/// when provided. Deterministic per seed.
Matrix synth(TensorDims dims, int tubal_rank, double noise_sigma, std::uint64_t seed,
             TransformMatrix* generator = nullptr);

/// Reproducibility record emitted by every CLI run. Round-trips losslessly
/// through its JSON encoding.
struct RunManifest {
  std::string command;
  std::string tool_version = kToolVersion;
  std::map<std::string, std::string> inputs;   // role -> path
  std::map<std::string, std::string> outputs;  // role -> path
  std::uint64_t seed = 0;
  std::optional<MaskSpec> mask_spec;
  std::optional<SolverConfig> solver_config;

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

/// Writes content to path atomically (temporary file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

const char* to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);
const char* to_string(MissingPattern pattern);
MissingPattern pattern_from_string(const std::string& name);

}  // namespace lstc
