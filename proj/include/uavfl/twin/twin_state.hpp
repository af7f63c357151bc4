#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uavfl::twin {

/// Actual (physical) operating parameters: f_n, q_n, q_UAV[k].
struct ActualParameters {
  std::vector<double> freq;
  std::vector<double> user_power;
  std::vector<double> uav_power;
};

/// Digital-twin view of every entity: estimate and deviation, with
/// actual = estimate - deviation.
struct TwinState {
  std::vector<double> est_freq;
  std::vector<double> freq_dev;
  std::vector<double> est_power;
  std::vector<double> power_dev;
  std::vector<double> est_uav_power;
  std::vector<double> uav_power_dev;

  std::size_t n_users() const { return est_freq.size(); }
  std::size_t k_slots() const { return est_uav_power.size(); }

  /// Throws std::invalid_argument on size mismatch or non-positive actual values.
  void validate() const;

  /// Twin whose estimates equal `actual` (all deviations zero).
  static TwinState exact(const ActualParameters& actual);

  /// Twin with the given deviations layered on top of `actual`
  /// (estimate = actual + deviation). Deviation vectors must match sizes.
  static TwinState with_deviations(const ActualParameters& actual, std::span<const double> freq_dev,
                                   std::span<const double> power_dev,
                                   std::span<const double> uav_power_dev);

  /// Twin whose per-entity deviation is a seeded fraction of the actual value,
  /// drawn uniformly from [min_fraction, max_fraction].
  static TwinState with_random_deviations(const ActualParameters& actual, double min_fraction,
                                          double max_fraction, std::uint64_t seed);
};

}  // namespace uavfl::twin
