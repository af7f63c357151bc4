#include "uavfl/model/physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavfl::model {

double channel_gain(Vec2 uav, Vec2 user, const SystemConfig& cfg) {
  return cfg.ref_gain / squared_distance(uav, user, cfg.altitude_m);
}

double link_rate(double d2, double power_w, const SystemConfig& cfg) {
  if (power_w <= 0.0) return 0.0;
  const double snr = cfg.beta0() * power_w / d2;
  return cfg.bandwidth_hz * std::log1p(snr) / std::numbers::ln2;
}

double uplink_rate(Vec2 uav, Vec2 user, double q_w, const SystemConfig& cfg) {
  return link_rate(squared_distance(uav, user, cfg.altitude_m), q_w, cfg);
}

double downlink_rate(Vec2 uav, Vec2 user, double q_uav_w, const SystemConfig& cfg) {
  return link_rate(squared_distance(uav, user, cfg.altitude_m), q_uav_w, cfg);
}

PhaseCost train_time_energy(const UserProfile& user, double freq_hz, const SystemConfig& cfg) {
  const double cycles = user.total_cycles();
  if (cycles == 0.0) return {};
  if (!(freq_hz > 0.0)) throw std::domain_error("train_time_energy: frequency must be > 0");
  return {cycles / freq_hz, cfg.capacitance_coeff * cycles * freq_hz * freq_hz};
}

PhaseCost transfer_time_energy(double bits, double power_w, double d2, const SystemConfig& cfg) {
  if (bits == 0.0) return {};
  if (!(power_w > 0.0)) throw std::domain_error("transfer_time_energy: power must be > 0");
  const double seconds = bits / link_rate(d2, power_w, cfg);
  return {seconds, power_w * seconds};
}

PhaseCost upload_time_energy(const UserProfile& user, double q_w, Vec2 uav, const SystemConfig& cfg) {
  return transfer_time_energy(user.upload_bits, q_w, squared_distance(uav, user.pos, cfg.altitude_m), cfg);
}

PhaseCost download_time_energy(const UserProfile& user, double q_uav_w, Vec2 uav,
                               const SystemConfig& cfg) {
  return transfer_time_energy(user.model_bits, q_uav_w,
                              squared_distance(uav, user.pos, cfg.altitude_m), cfg);
}

}  // namespace uavfl::model
