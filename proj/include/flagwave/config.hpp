// Versioned JSON run configuration.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "flagwave/atomic.hpp"
#include "flagwave/harness.hpp"
#include "flagwave/kernels.hpp"
#include "flagwave/lattice.hpp"
#include "flagwave/scale_grid.hpp"
#include "json.hpp"

namespace flagwave {

constexpr int kConfigVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int version = kConfigVersion;
  LatticeSpec lattice{1, 1, 256, 16.0};
  KernelKind kernel = KernelKind::kLittlewoodPaley;
  Calibration calibration = Calibration::kDiscretelyRenormalized;
  int j_min = -2, j_max = 7, k_min = -2, k_max = 7;
  int samples_per_block = 1;
  CorpusSpec corpus;
  AtomicOptions atomic;
  double reconstruction_tolerance = 5e-2;
  int pp_cell_shift = 2;
  double norms_c_emp_max = 100.0;
  int journe_sets = 100;
  int journe_N = 64;
  double journe_delta = 1.0;
  double journe_bound = 10.0;
  double selftest_tolerance = 1e-10;
  int workers = 1;
  std::string output_dir = "flagwave-out";
  std::uint64_t seed = 20240611;

  ScaleGrid scale_grid() const;
  KernelPair kernel_pair() const;
};

// Missing keys keep their defaults; unknown keys, wrong types and violated
// preconditions throw ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& c);

nlohmann::json config_json(const RunConfig& c);
// JSON Schema of the file, every default written inline.
nlohmann::json config_schema();

}  // namespace flagwave
