#pragma once

#include "winfty/descent.hpp"

#include <cstdint>
#include <string>

namespace winfty {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string experiment = "exp1";
  std::optional<int> mesh_n;          // generator resolution override
  std::optional<std::string> mesh_file;
  int levels = 4;
  RunMode mode = RunMode::Cascade;
  double gamma = 1e-4;
  int t_min_exp = 11;
  AdmmParams admm;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  DescentConfig descent() const;
  ExperimentSetup setup() const;   // experiment with mesh overrides applied
};

/// Parses the flat `key = value` configuration format.  Unknown keys, type
/// mismatches and range violations throw ConfigError naming the key.
RunConfig parse_config(const std::string& path);

/// Runs the configured experiment and writes history.csv, table.csv (converge
/// mode) and one deformed mesh file per level into the output directory.
/// Returns 0 on completion, nonzero on failure.
int run(const RunConfig& config);

}  // namespace winfty
