#pragma once

#include "uavfl/model/config.hpp"
#include "uavfl/twin/twin_state.hpp"

namespace uavfl::twin {

/// C*I*D / est_freq. Throws std::domain_error for est_freq <= 0.
double estimated_train_time(const model::UserProfile& user, double est_freq);

/// C*I*D*dev / (est*(est - dev)): what must be added to the estimated
/// training time to get the actual one. Throws std::domain_error when
/// est - dev <= 0 (the singular case est == dev included).
double latency_gap(const model::UserProfile& user, double est_freq, double freq_dev);

/// Componentwise estimate - deviation.
ActualParameters compensate(const TwinState& twin);

/// Commands that realize `actual` under the twin's deviations:
/// estimate = actual + deviation, deviations copied from `deviations`.
TwinState commands_for(const ActualParameters& actual, const TwinState& deviations);

ActualParameters actual_of(const model::AllocationSolution& solution);

/// Per-entity deviation as a fraction of the commanded estimate: a device
/// commanded with c realizes c * (1 - fraction). Fractions lie in [0, 1).
struct DeviationProfile {
  std::vector<double> freq;
  std::vector<double> user_power;
  std::vector<double> uav_power;

  void validate() const;
  /// Fractions drawn uniformly from [lo, hi].
  static DeviationProfile random(std::size_t n_users, std::size_t k_slots, double lo, double hi,
                                 std::uint64_t seed);
};

/// Twin seen with feedback: estimate = plan / (1 - fraction), so compensate() returns the plan.
TwinState twin_for_plan(const ActualParameters& plan, const DeviationProfile& profile);

/// What the devices actually run when given `commands`.
ActualParameters realize(const ActualParameters& commands, const DeviationProfile& profile);

/// Commands of a planner without per-entity feedback that only knows the
/// worst-case fraction: plan / (1 - worst_fraction), which never under-delivers.
ActualParameters robust_commands(const ActualParameters& plan, double worst_fraction);

}  // namespace uavfl::twin
