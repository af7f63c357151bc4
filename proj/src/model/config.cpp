#include "uavfl/model/config.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "uavfl/common/seed.hpp"

namespace uavfl::model {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

double SystemConfig::noise_power_w() const {
  // dBm/Hz -> W/Hz, times the band.
  return std::pow(10.0, noise_psd_dbm_hz / 10.0) * 1e-3 * bandwidth_hz;
}

double SystemConfig::beta0() const { return ref_gain / noise_power_w(); }

void SystemConfig::validate() const {
  if (k_slots == 0) throw std::invalid_argument("k_slots must be >= 1");
  require_positive(altitude_m, "altitude_m");
  require_positive(slot_len_s, "slot_len_s");
  require_positive(v_max_mps, "v_max_mps");
  require_positive(bandwidth_hz, "bandwidth_hz");
  require_positive(ref_gain, "ref_gain");
  require_positive(t_max_s, "t_max_s");
  require_positive(f_max_hz, "f_max_hz");
  require_positive(q_max_w, "q_max_w");
  require_positive(q_uav_max_w, "q_uav_max_w");
  require_positive(avg_power_w, "avg_power_w");
  require_positive(capacitance_coeff, "capacitance_coeff");
  if (!std::isfinite(noise_psd_dbm_hz)) throw std::invalid_argument("noise_psd_dbm_hz must be finite");
  for (double v : {start_pos.x, start_pos.y, end_pos.x, end_pos.y}) {
    if (!std::isfinite(v)) throw std::invalid_argument("start/end positions must be finite");
  }
  const double straight = std::sqrt(squared_planar_distance(start_pos, end_pos));
  if (straight > max_step_m() * static_cast<double>(k_slots + 1)) {
    throw std::invalid_argument("end_pos unreachable within k_slots steps of max_step_m");
  }
}

void UserProfile::validate() const {
  require_positive(data_size, "data_size");
  require_positive(cycles_per_sample, "cycles_per_sample");
  require_positive(local_iters, "local_iters");
  require_positive(upload_bits, "upload_bits");
  require_positive(model_bits, "model_bits");
  if (!std::isfinite(pos.x) || !std::isfinite(pos.y)) throw std::invalid_argument("user pos must be finite");
}

UavTrajectory straight_line_trajectory(const SystemConfig& cfg) {
  UavTrajectory traj;
  traj.waypoints.reserve(cfg.k_slots);
  const double denom = static_cast<double>(cfg.k_slots + 1);
  for (std::size_t k = 1; k <= cfg.k_slots; ++k) {
    const double a = static_cast<double>(k) / denom;
    traj.waypoints.push_back({cfg.start_pos.x + a * (cfg.end_pos.x - cfg.start_pos.x),
                              cfg.start_pos.y + a * (cfg.end_pos.y - cfg.start_pos.y)});
  }
  return traj;
}

std::vector<UserProfile> generate_users(const SystemConfig& cfg, const UserGenerator& gen,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, "users"));
  std::uniform_real_distribution<double> coord(0.0, gen.area_m);
  std::uniform_real_distribution<double> data(gen.data_size_min, gen.data_size_max);
  std::vector<UserProfile> users(cfg.n_users);
  for (auto& u : users) {
    u.pos = {coord(rng), coord(rng)};
    u.data_size = std::round(data(rng));
    u.cycles_per_sample = gen.cycles_per_sample;
    u.local_iters = gen.local_iters;
    u.upload_bits = gen.model_params * 32.0;
    u.model_bits = gen.model_params * 32.0;
  }
  return users;
}

}  // namespace uavfl::model
