#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uavfl/model/physics.hpp"

namespace uavfl::twin {
struct TwinState;
}

namespace uavfl::model {

// A round may fall in any of the K slots, so each user's upload and download
// are charged at their worst slot. Latency and energy below follow that rule.

struct UserRoundCost {
  PhaseCost train;
  PhaseCost up;
  PhaseCost down;
  std::size_t worst_up_slot = 0;
  std::size_t worst_down_slot = 0;
  double estimated_train_s = 0.0;  ///< twin estimate of the training time
  double latency_gap_s = 0.0;      ///< actual minus estimated training time

  double latency_s() const { return train.seconds + up.seconds + down.seconds; }
  double energy_j() const { return train.joules + up.joules + down.joules; }
};

struct Residual {
  std::string name;
  double value = 0.0;  ///< <= 0 means satisfied
};

struct EnergyLatencyReport {
  std::vector<UserRoundCost> users;
  double total_energy_j = 0.0;
  double total_latency_s = 0.0;
  std::vector<Residual> constraint_residuals;

  /// Largest positive residual, 0 when feasible.
  double max_violation() const;
};

/// Signed residual of every constraint: frequency, user power and UAV power
/// boxes, the slot-average UAV power cap, per-user latency, and the K+1
/// trajectory step limits (start, between waypoints, end).
std::vector<Residual> constraint_residuals(const AllocationSolution& solution,
                                           std::span<const UserProfile> users,
                                           const SystemConfig& cfg);

/// Per-user phase costs and totals. With a twin, the per-user deviation
/// fills the estimated training time and the latency gap.
/// Throws std::invalid_argument on dimension mismatch.
EnergyLatencyReport round_totals(const AllocationSolution& solution,
                                 std::span<const UserProfile> users,
                                 const twin::TwinState* twin, const SystemConfig& cfg);

inline EnergyLatencyReport round_totals(const AllocationSolution& solution,
                                        std::span<const UserProfile> users,
                                        const SystemConfig& cfg) {
  return round_totals(solution, users, nullptr, cfg);
}

/// Throws std::invalid_argument unless the solution has N users and K slots.
void check_dimensions(const AllocationSolution& solution, std::size_t n_users,
                      const SystemConfig& cfg);

}  // namespace uavfl::model
