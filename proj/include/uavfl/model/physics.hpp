#pragma once

#include "uavfl/model/config.hpp"

namespace uavfl::model {

struct PhaseCost {
  double seconds = 0.0;
  double joules = 0.0;
};

/// Free-space gain ref_gain / d^2 between the UAV (at altitude) and a ground user.
double channel_gain(Vec2 uav, Vec2 user, const SystemConfig& cfg);

/// B * log2(1 + beta0 * power / d2) for a link with squared distance `d2`.
double link_rate(double d2, double power_w, const SystemConfig& cfg);

double uplink_rate(Vec2 uav, Vec2 user, double q_w, const SystemConfig& cfg);
double downlink_rate(Vec2 uav, Vec2 user, double q_uav_w, const SystemConfig& cfg);

/// Local training: C*I*D / f seconds and alpha*I*C*D*f^2 joules.
/// Throws std::domain_error for f <= 0 with a non-empty workload.
PhaseCost train_time_energy(const UserProfile& user, double freq_hz, const SystemConfig& cfg);

/// Upload of `user.upload_bits` at power q over the given geometry.
PhaseCost upload_time_energy(const UserProfile& user, double q_w, Vec2 uav, const SystemConfig& cfg);

/// Download of `user.model_bits` at UAV power q_uav.
PhaseCost download_time_energy(const UserProfile& user, double q_uav_w, Vec2 uav,
                               const SystemConfig& cfg);

/// Transfer of `bits` over a link of squared distance d2 at the given power.
PhaseCost transfer_time_energy(double bits, double power_w, double d2, const SystemConfig& cfg);

}  // namespace uavfl::model
