#include "uavfl/model/report.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "uavfl/twin/compensation.hpp"
#include "uavfl/twin/twin_state.hpp"

namespace uavfl::model {
namespace {

std::string indexed(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

}  // namespace

double EnergyLatencyReport::max_violation() const {
  double worst = 0.0;
  for (const auto& r : constraint_residuals) worst = std::max(worst, r.value);
  return worst;
}

void check_dimensions(const AllocationSolution& solution, std::size_t n_users, const SystemConfig& cfg) {
  if (solution.freq.size() != n_users || solution.user_power.size() != n_users) {
    throw std::invalid_argument("allocation does not match the number of users");
  }
  if (solution.uav_power.size() != cfg.k_slots || solution.trajectory.waypoints.size() != cfg.k_slots) {
    throw std::invalid_argument("allocation does not match k_slots");
  }
}

EnergyLatencyReport round_totals(const AllocationSolution& solution,
                                 std::span<const UserProfile> users,
                                 const twin::TwinState* twin, const SystemConfig& cfg) {
  check_dimensions(solution, users.size(), cfg);
  if (twin != nullptr && twin->n_users() != users.size()) {
    throw std::invalid_argument("twin does not match the number of users");
  }
  EnergyLatencyReport report;
  report.users.reserve(users.size());
  const auto& wps = solution.trajectory.waypoints;
  for (std::size_t n = 0; n < users.size(); ++n) {
    const auto& user = users[n];
    UserRoundCost cost;
    cost.train = train_time_energy(user, solution.freq[n], cfg);
    for (std::size_t k = 0; k < wps.size(); ++k) {
      const PhaseCost up = upload_time_energy(user, solution.user_power[n], wps[k], cfg);
      if (k == 0 || up.seconds > cost.up.seconds) {
        cost.up = up;
        cost.worst_up_slot = k;
      }
      const PhaseCost down = download_time_energy(user, solution.uav_power[k], wps[k], cfg);
      if (k == 0 || down.joules > cost.down.joules) {
        cost.down = down;
        cost.worst_down_slot = k;
      }
    }
    if (twin != nullptr) {
      // The twin supplies the deviation; the estimate that realizes f is f + dev.
      const double est = solution.freq[n] + twin->freq_dev[n];
      cost.estimated_train_s = twin::estimated_train_time(user, est);
      cost.latency_gap_s = twin::latency_gap(user, est, twin->freq_dev[n]);
    } else {
      cost.estimated_train_s = cost.train.seconds;
    }
    report.users.push_back(cost);
  }
  for (const auto& c : report.users) {
    report.total_energy_j += c.energy_j();
    report.total_latency_s = std::max(report.total_latency_s, c.latency_s());
  }
  report.constraint_residuals = constraint_residuals(solution, users, cfg);
  return report;
}

std::vector<Residual> constraint_residuals(const AllocationSolution& solution,
                                           std::span<const UserProfile> users,
                                           const SystemConfig& cfg) {
  check_dimensions(solution, users.size(), cfg);
  std::vector<Residual> out;
  for (std::size_t n = 0; n < users.size(); ++n) {
    out.push_back({indexed("f_lo", n), -solution.freq[n]});
    out.push_back({indexed("f_hi", n), solution.freq[n] - cfg.f_max_hz});
    out.push_back({indexed("q_lo", n), -solution.user_power[n]});
    out.push_back({indexed("q_hi", n), solution.user_power[n] - cfg.q_max_w});
  }
  const auto& wps = solution.trajectory.waypoints;
  for (std::size_t k = 0; k < wps.size(); ++k) {
    out.push_back({indexed("quav_lo", k), -solution.uav_power[k]});
    out.push_back({indexed("quav_hi", k), solution.uav_power[k] - cfg.q_uav_max_w});
  }
  const double mean_uav =
      std::accumulate(solution.uav_power.begin(), solution.uav_power.end(), 0.0) /
      static_cast<double>(wps.size());
  out.push_back({"quav_avg", mean_uav - cfg.avg_power_w});

  for (std::size_t n = 0; n < users.size(); ++n) {
    double latency = 0.0;
    // Zero frequency or power makes the round unbounded; report that as +inf.
    if (solution.freq[n] <= 0.0 || solution.user_power[n] <= 0.0 ||
        std::any_of(solution.uav_power.begin(), solution.uav_power.end(), [](double q) { return q <= 0.0; })) {
      latency = std::numeric_limits<double>::infinity();
    } else {
      double up = 0.0;
      double down = 0.0;
      for (std::size_t k = 0; k < wps.size(); ++k) {
        up = std::max(up, upload_time_energy(users[n], solution.user_power[n], wps[k], cfg).seconds);
        down = std::max(down, download_time_energy(users[n], solution.uav_power[k], wps[k], cfg).seconds);
      }
      latency = train_time_energy(users[n], solution.freq[n], cfg).seconds + up + down;
    }
    out.push_back({indexed("latency", n), latency - cfg.t_max_s});
  }

  const double l2 = cfg.max_step_m() * cfg.max_step_m();
  Vec2 prev = cfg.start_pos;
  for (std::size_t k = 0; k < wps.size(); ++k) {
    out.push_back({indexed("step", k), squared_planar_distance(wps[k], prev) - l2});
    prev = wps[k];
  }
  out.push_back({indexed("step", wps.size()), squared_planar_distance(cfg.end_pos, prev) - l2});
  return out;
}

}  // namespace uavfl::model
