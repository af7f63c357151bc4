#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "uavfl/app/csv.hpp"
#include "uavfl/app/run_config.hpp"
#include "uavfl/fl/round.hpp"
#include "uavfl/model/report.hpp"
#include "uavfl/sca/bcd.hpp"
#include "uavfl/twin/compensation.hpp"

namespace uavfl::app {

enum class Baseline { kNone, kFixedTrajectory, kFixedAllocation };

/// "none", "fixed-traj" or "fixed-alloc"; anything else throws ConfigError.
Baseline parse_baseline(std::string_view s);
const char* to_string(Baseline b);

struct OptimizeOutcome {
  Baseline baseline = Baseline::kNone;
  bool dt = true;
  std::vector<model::UserProfile> users;
  sca::BcdResult result;
  twin::DeviationProfile deviations;
  twin::ActualParameters commands;  ///< what the devices were told to run
  model::AllocationSolution realized;
  model::EnergyLatencyReport planned_report;
  model::EnergyLatencyReport realized_report;
};

/// Plan only: bcd_optimize or a baseline plus seeded device deviations.
/// The realization fields stay empty until realize_plan.
OptimizeOutcome plan_optimize(const RunConfig& cfg, Baseline baseline);
/// Fills commands and the realized round for a plan. With dt the twin's
/// per-entity deviations are compensated exactly; without it the commands
/// carry the robust margin plan / (1 - deviation_max).
void realize_plan(const RunConfig& cfg, OptimizeOutcome& o, bool dt);
/// plan_optimize followed by realize_plan.
OptimizeOutcome run_optimize(const RunConfig& cfg, Baseline baseline, bool dt);

CsvTable trajectory_table(const OptimizeOutcome& o);
CsvTable energy_trace_table(const sca::SolveTrace& trace, bool timing);
CsvTable allocation_table(const OptimizeOutcome& o);
/// Writes trajectory.csv, energy_trace.csv, allocation.csv, sync_events.csv
/// and optimize_summary.json into the output directory.
void write_optimize_outputs(const RunConfig& cfg, const OptimizeOutcome& o);

/// Runs the paired FL experiment; `attack` forces the attack on.
std::vector<fl::RoundRecord> run_simulate(const RunConfig& cfg, bool run_protected, bool run_unprotected,
                                          bool attack);
CsvTable fl_metrics_table(std::span<const fl::RoundRecord> records);

struct BenchRow {
  std::size_t dim = 0;
  int rounds = 0;
  std::size_t clients = 0;
  std::size_t payload_bytes = 0;   ///< plaintext 32-bit weights of one client
  std::size_t overhead_bytes = 0;  ///< proof core plus one client signature
  double gen_ms_mean = 0.0;
  double gen_ms_std = 0.0;
  double verify_ms_mean = 0.0;
  double verify_ms_std = 0.0;
};

/// Throws ConfigError for zero rounds or an empty dimension list.
std::vector<BenchRow> run_bench_zk(const RunConfig& cfg, std::span<const std::size_t> dims);
CsvTable overhead_table(std::span<const BenchRow> rows);

}  // namespace uavfl::app
