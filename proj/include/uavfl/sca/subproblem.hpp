#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uavfl/model/config.hpp"
#include "uavfl/sca/convex_function.hpp"

namespace uavfl::sca {

/// Expansion point of the user-side block: upload energy slack z, spectral
/// efficiency slack psi, SNR slack theta and upload-time slack t.
struct UserLinPoint {
  double z = 0.0;
  double psi = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

/// Expansion point of the UAV-side block for one user: download energy
/// slack omega, upload/download time slacks u and v, and per-slot
/// efficiency xi, SNR eta and squared distance lambda.
struct UavLinPoint {
  double omega = 0.0;
  double u = 0.0;
  double v = 0.0;
  std::vector<double> xi;
  std::vector<double> eta;
  std::vector<double> lambda;
};

struct LinearizationPoint {
  std::vector<UserLinPoint> user;
  std::vector<UavLinPoint> uav;
};

/// Positivity floor applied to every expansion-point component.
inline constexpr double kLinFloor = 1e-30;

/// Expansion point at which every convexified bound is tight for `solution`.
LinearizationPoint tight_linearization(const model::AllocationSolution& solution,
                                       std::span<const model::UserProfile> users,
                                       const model::SystemConfig& cfg);

struct BuiltSubproblem {
  SubproblemSpec spec;
  Eigen::VectorXd start;  ///< the expansion point in the spec's variable layout
  // Positions of the decision variables; empty when the block does not own them.
  std::vector<std::size_t> f_idx;  ///< in GHz
  std::vector<std::size_t> q_idx;
  std::vector<std::size_t> x_idx;
  std::vector<std::size_t> y_idx;
  std::vector<std::size_t> quav_idx;
};

/// User block with trajectory and UAV powers fixed. Per user the variables
/// are [f (GHz), q, z, psi, theta, t]. Throws SolverError(kInfeasible) if the
/// fixed download time already exhausts a user's latency budget.
BuiltSubproblem build_subproblem1(std::span<const model::UserProfile> users,
                                  const model::AllocationSolution& fixed,
                                  const LinearizationPoint& lin, const model::SystemConfig& cfg);

/// UAV block with q fixed. Variables are [x_k, y_k, q_uav_k] per slot,
/// [omega, u, v] per user and [xi, eta, lambda] per (user, slot). With
/// `pin_trajectory` the waypoints are constants and only powers move. With
/// `free_freq` each user's f is a variable as well (it shares the deadline
/// with the download); otherwise f stays fixed.
BuiltSubproblem build_subproblem2(std::span<const model::UserProfile> users,
                                  const model::AllocationSolution& fixed,
                                  const LinearizationPoint& lin, const model::SystemConfig& cfg,
                                  bool pin_trajectory = false, bool free_freq = true);

/// Copy the decision variables of a solved block back into `base`.
model::AllocationSolution apply_solution(const BuiltSubproblem& sp, const Eigen::VectorXd& x,
                                         model::AllocationSolution base);

/// Upload time as a function of squared distance at fixed power, and its derivative.
double upload_time_of_d2(double upload_bits, double q_w, double d2, const model::SystemConfig& cfg);
double upload_time_slope(double upload_bits, double q_w, double d2, const model::SystemConfig& cfg);

}  // namespace uavfl::sca
