#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlpgg/boundary.hpp"
#include "mlpgg/dynamics.hpp"
#include "mlpgg/experiments.hpp"

// JSON config documents for the three workflows. Every parser rejects unknown keys,
// wrong types and out-of-range values with a ConfigError naming the offending field.
namespace mlpgg::config {

struct SimulateConfig {
  StrategySetting setting = StrategySetting::binary;
  LatticeDims lattice{20, 20};
  GameParams params;
  TargetMode target = TargetMode::neighbor;
  std::optional<InitSpec> init;
  StopCriteria stop;
  std::uint64_t seed = 1;
  std::size_t snapshot_scale = 8;
};

struct BoundaryConfig {
  GameParams params;
  std::size_t population_size = 100;
  std::vector<double> rg_values{5.0, 20.0, 100.0};
  std::vector<PatchSpec> patches;
};

SimulateConfig parse_simulate(std::string_view text);
SweepSpec parse_sweep(std::string_view text);
BoundaryConfig parse_boundary(std::string_view text);

std::string read_text(const std::filesystem::path& path);

inline SimulateConfig load_simulate(const std::filesystem::path& p) { return parse_simulate(read_text(p)); }
inline SweepSpec load_sweep(const std::filesystem::path& p) { return parse_sweep(read_text(p)); }
inline BoundaryConfig load_boundary(const std::filesystem::path& p) { return parse_boundary(read_text(p)); }

// Comma-separated numbers, e.g. "5,20,100".
std::vector<double> parse_number_list(std::string_view text);

}  // namespace mlpgg::config
