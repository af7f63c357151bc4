#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uavfl/model/geometry.hpp"

namespace uavfl::model {

/// Physical and optimization constants of one UAV-assisted FL deployment.
/// Defaults follow the desk-scale reference scenario: 5 users, 5 slots,
/// 50 m altitude, 5 km per-slot reach, 500 s round deadline.
struct SystemConfig {
  std::size_t n_users = 5;
  std::size_t k_slots = 5;
  double altitude_m = 50.0;
  double slot_len_s = 100.0;
  double v_max_mps = 50.0;
  Vec2 start_pos{0.0, 0.0};
  Vec2 end_pos{70.0, 70.0};
  double bandwidth_hz = 1e6;          ///< per-user FDMA band
  double noise_psd_dbm_hz = -174.0;
  double ref_gain = 1e-3;             ///< channel power gain at 1 m
  double t_max_s = 500.0;
  double f_max_hz = 1e9;
  double q_max_w = 50.0;
  double q_uav_max_w = 100.0;
  double avg_power_w = 80.0;          ///< cap on the slot-average UAV power
  double capacitance_coeff = 1e-28;

  double max_step_m() const { return v_max_mps * slot_len_s; }
  /// Noise power over one user band, in watts.
  double noise_power_w() const;
  /// Reference SNR coefficient: ref_gain / noise power.
  double beta0() const;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

struct UserProfile {
  Vec2 pos;
  double data_size = 1000.0;         ///< samples D_n
  double cycles_per_sample = 1e4;    ///< C_n
  double local_iters = 10.0;         ///< I_n
  double upload_bits = 251200.0;     ///< local model upload payload
  double model_bits = 251200.0;      ///< global model download payload w_n

  double total_cycles() const { return cycles_per_sample * local_iters * data_size; }
  void validate() const;
};

struct UavTrajectory {
  std::vector<Vec2> waypoints;
};

/// Decision variables of the energy problem, all in actual (physical) units.
struct AllocationSolution {
  UavTrajectory trajectory;
  std::vector<double> freq;        ///< f_n, Hz
  std::vector<double> user_power;  ///< q_n, W
  std::vector<double> uav_power;   ///< q_UAV[k], W
};

/// Evenly spaced waypoints on the segment start -> end, excluding both ends.
UavTrajectory straight_line_trajectory(const SystemConfig& cfg);

/// Parameters for scattering users over a square area.
struct UserGenerator {
  double area_m = 500.0;
  double data_size_min = 800.0;
  double data_size_max = 1200.0;
  double cycles_per_sample = 1e4;
  double local_iters = 10.0;
  double model_params = 7850.0;   ///< 32-bit parameters per model
};

std::vector<UserProfile> generate_users(const SystemConfig& cfg, const UserGenerator& gen,
                                        std::uint64_t seed);

}  // namespace uavfl::model
