#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mlpgg/dynamics.hpp"
#include "mlpgg/payoff.hpp"
#include "mlpgg/population.hpp"

namespace mlpgg {

inline constexpr const char* kMixedLabel = "MIXED";
inline constexpr double kDominanceThreshold = 0.99;

// Parameter axes; the sweep visits their Cartesian product with r_p outermost and mu innermost.
struct SweepGrid {
  std::vector<double> r_pairwise{1.6};
  std::vector<double> r_local{4.0};
  std::vector<double> r_global{5.0};
  std::vector<double> beta{0.5};
  std::vector<double> sigma{1.0};
  std::vector<double> mu{0.0};
};

struct SweepSpec {
  SweepGrid grid;
  LatticeDims lattice{20, 20};
  StrategySetting setting = StrategySetting::binary;
  std::size_t replicates = 20;
  StopCriteria stop;
  std::uint64_t base_seed = 1;
  double quorum = 0.6;
  TargetMode target = TargetMode::neighbor;
  // Unset means uniform random over the setting's strategy space.
  std::optional<InitSpec> init;

  void validate() const;
};

using CellCoords = std::array<std::size_t, 6>;  // indices into r_p, r_l, r_g, beta, sigma, mu

struct CellPoint {
  std::size_t index = 0;
  CellCoords coords{};
  GameParams params;
};

std::vector<CellPoint> expand_grid(const SweepSpec& spec);

// Stream seeds of one replicate. Depend on the base seed and grid indices only, never on
// parameter values, so changing an axis value keeps every cell's random streams.
struct ReplicateSeeds {
  std::uint64_t init;
  std::uint64_t dynamics;
};
ReplicateSeeds replicate_seeds(std::uint64_t base_seed, const CellCoords& coords, std::size_t replicate);

struct ReplicateOutcome {
  TerminalKind status = TerminalKind::round_cap_reached;
  std::string label;
  std::size_t rounds = 0;
  std::vector<std::uint32_t> final_counts;
  std::vector<std::optional<std::size_t>> extinction;  // per type, canonical order
};

struct PhaseRecord {
  CellPoint point;
  std::vector<ReplicateOutcome> replicates;
  std::string label;
  double label_fraction = 0.0;
  double mean_rounds = 0.0;
};

// absorbed(s) -> s; else the strategy holding >= 99% of the population at the end; else MIXED.
std::string classify_run(const Trajectory& trajectory);

struct AggregateLabel {
  std::string label;
  double fraction = 0.0;  // share of replicates carrying the majority label
};

// Majority label, or MIXED when the majority share is below quorum. Ties go to the
// lexicographically smaller label, which is also canonical strategy order.
AggregateLabel aggregate(std::span<const std::string> labels, double quorum = 0.6);

// First round at which each strategy type's count is zero.
std::vector<std::optional<std::size_t>> extinction_census(const Trajectory& trajectory);

// Runs one replicate of a cell.
Trajectory run_replicate(const SweepSpec& spec, const PopulationGraph& graph, const CellPoint& cell,
                         std::size_t replicate);
ReplicateOutcome summarize(const Trajectory& trajectory);
PhaseRecord make_record(const SweepSpec& spec, const CellPoint& cell, std::vector<ReplicateOutcome> replicates);

struct SweepOptions {
  std::size_t workers = 1;
  // Called once per cell in cell-index order, from one thread at a time.
  std::function<void(const PhaseRecord&)> sink;
  // Cells already finished by an earlier run, keyed by cell index. They are passed to the sink
  // and returned without rerunning.
  std::map<std::size_t, PhaseRecord> completed;
};

struct CellError {
  std::size_t cell_index;
  std::string message;
};

struct SweepResult {
  std::vector<PhaseRecord> records;  // cell-index order
  std::vector<CellError> errors;     // sink failures; the sweep carries on past them
};

SweepResult sweep(const SweepSpec& spec, SweepOptions options = {});

// ---- serialization ----

std::string format_number(double x);
std::string format_number(std::size_t x);

std::string phase_csv_header();
std::string phase_csv_row(const SweepSpec& spec, const PhaseRecord& record);
void write_phase_csv(std::ostream& out, const SweepSpec& spec, std::span<const PhaseRecord> records);
void export_phase_csv(const std::filesystem::path& path, const SweepSpec& spec, std::span<const PhaseRecord> records);

// Header "round,<label>..." then one row per recorded round with frequencies.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void export_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

// RGB per strategy type, canonical order.
std::array<std::uint8_t, 3> strategy_color(Strategy s);

// Writes <dir>/snapshot_<round>.txt (row-major labels) and <dir>/snapshot_<round>.ppm
// (binary P6, scale x scale pixels per cell). Returns the two paths.
std::array<std::filesystem::path, 2> export_snapshot(const std::filesystem::path& dir, const StrategyProfile& profile,
                                                     LatticeDims dims, std::size_t round, std::size_t scale = 8);

// Completed-cell manifest: one JSON object per line.
std::string manifest_line(const PhaseRecord& record);
std::map<std::size_t, PhaseRecord> read_manifest(const std::filesystem::path& path, const SweepSpec& spec);

}  // namespace mlpgg
