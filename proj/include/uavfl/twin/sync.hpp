#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uavfl/twin/twin_state.hpp"

namespace uavfl::twin {

/// Refresh cadence of the twin: UAV telemetry every 1-2 s, user metrics
/// every 5 s, and a feedback delay bound below 200 ms.
struct SyncSchedule {
  double telemetry_period_s = 1.5;
  double user_metrics_period_s = 5.0;
  double feedback_delay_s = 0.2;

  void validate() const;
};

struct DeviationDynamics {
  double drift_std_fraction = 0.01;  ///< random-walk std per sqrt(second), relative to actual
  double residual_fraction = 0.01;   ///< deviation kept after a refresh
};

struct SyncEvent {
  double sim_time_s = 0.0;
  std::string entity_id;
  std::string field;
  double old_dev = 0.0;
  double new_dev = 0.0;
  double delay_ms = 0.0;
};

/// Simulated twin synchronization. Between refreshes deviations drift as a
/// seeded random walk; at each refresh boundary the deviation of the
/// refreshed entities shrinks to residual_fraction of its value.
class TwinSynchronizer {
 public:
  TwinSynchronizer(SyncSchedule schedule, DeviationDynamics dynamics, std::uint64_t seed);

  /// Advance to `sim_clock` (must not go backwards), mutating `twin` so that
  /// estimate = truth + deviation holds afterwards. Returns refresh events.
  std::vector<SyncEvent> tick(double sim_clock, TwinState& twin, const ActualParameters& truth);

  double clock() const { return clock_; }

 private:
  void drift(double dt, TwinState& twin, const ActualParameters& truth);
  void refresh_users(double t, TwinState& twin, const ActualParameters& truth,
                     std::vector<SyncEvent>& out);
  void refresh_uav(double t, TwinState& twin, const ActualParameters& truth,
                   std::vector<SyncEvent>& out);

  SyncSchedule schedule_;
  DeviationDynamics dynamics_;
  std::mt19937_64 rng_;
  double clock_ = 0.0;
  long next_telemetry_ = 1;
  long next_user_metrics_ = 1;
};

}  // namespace uavfl::twin
