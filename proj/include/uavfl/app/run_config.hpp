#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "uavfl/fl/experiment.hpp"
#include "uavfl/model/config.hpp"
#include "uavfl/sca/bcd.hpp"
#include "uavfl/twin/sync.hpp"

namespace uavfl::app {

struct TwinConfig {
  double deviation_min = 0.0;   ///< deviation as a fraction of the commanded estimate
  double deviation_max = 0.1;
  double sync_duration_s = 10.0;  ///< simulated span for sync_events.csv
  twin::DeviationDynamics dynamics;
};

struct BenchConfig {
  int rounds = 5;
  std::size_t clients = 5;
};

/// Everything a command needs. Sections: run, system, users, twin, sync,
/// solver, fl, data, attack, zkfed, bench.
struct RunConfig {
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  bool timing = true;

  model::SystemConfig system;
  model::UserGenerator users;
  TwinConfig twin;
  twin::SyncSchedule sync;
  sca::BcdOptions solver;
  fl::ExperimentConfig fl;  ///< seed, timing and policy are filled from the sections above
  BenchConfig bench;

  /// Range checks for every field; throws ConfigError.
  void validate() const;
};

inline constexpr std::string_view kOutputDirEnv = "UAVFL_OUTPUT_DIR";

/// Parses an INI file. Unknown sections or keys, unparsable values and range
/// violations throw ConfigError; unreadable files throw IoError. The
/// UAVFL_OUTPUT_DIR environment variable overrides run.output_dir.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view ini_text);

}  // namespace uavfl::app
