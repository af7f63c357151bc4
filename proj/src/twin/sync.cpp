#include "uavfl/twin/sync.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavfl/common/seed.hpp"

namespace uavfl::twin {

void SyncSchedule::validate() const {
  if (telemetry_period_s < 1.0 || telemetry_period_s > 2.0) {
    throw std::invalid_argument("telemetry_period_s must lie in [1, 2]");
  }
  if (!(user_metrics_period_s > 0.0)) throw std::invalid_argument("user_metrics_period_s must be > 0");
  if (feedback_delay_s < 0.0 || feedback_delay_s > 0.2) {
    throw std::invalid_argument("feedback_delay_s must lie in [0, 0.2]");
  }
}

TwinSynchronizer::TwinSynchronizer(SyncSchedule schedule, DeviationDynamics dynamics,
                                   std::uint64_t seed)
    : schedule_(schedule), dynamics_(dynamics), rng_(sub_seed(seed, "twin-sync")) {
  schedule_.validate();
  if (dynamics_.drift_std_fraction < 0.0 || dynamics_.residual_fraction < 0.0 ||
      dynamics_.residual_fraction > 1.0) {
    throw std::invalid_argument("deviation dynamics out of range");
  }
}

void TwinSynchronizer::drift(double dt, TwinState& twin, const ActualParameters& truth) {
  if (dt <= 0.0 || dynamics_.drift_std_fraction == 0.0) return;
  std::normal_distribution<double> step(0.0, 1.0);
  const double scale = dynamics_.drift_std_fraction * std::sqrt(dt);
  auto walk = [&](std::vector<double>& est, std::vector<double>& dev, const std::vector<double>& act) {
    for (std::size_t i = 0; i < dev.size(); ++i) {
      // keep the estimate positive: deviation stays above -actual
      dev[i] = std::max(dev[i] + scale * std::abs(act[i]) * step(rng_), -0.99 * act[i]);
      est[i] = act[i] + dev[i];
    }
  };
  walk(twin.est_freq, twin.freq_dev, truth.freq);
  walk(twin.est_power, twin.power_dev, truth.user_power);
  walk(twin.est_uav_power, twin.uav_power_dev, truth.uav_power);
}

void TwinSynchronizer::refresh_users(double t, TwinState& twin, const ActualParameters& truth,
                                     std::vector<SyncEvent>& out) {
  std::uniform_real_distribution<double> delay(0.0, schedule_.feedback_delay_s * 1000.0);
  for (std::size_t n = 0; n < twin.freq_dev.size(); ++n) {
    const std::string id = "user" + std::to_string(n);
    const double old_f = twin.freq_dev[n];
    const double old_p = twin.power_dev[n];
    twin.freq_dev[n] = dynamics_.residual_fraction * old_f;
    twin.est_freq[n] = truth.freq[n] + twin.freq_dev[n];
    twin.power_dev[n] = dynamics_.residual_fraction * old_p;
    twin.est_power[n] = truth.user_power[n] + twin.power_dev[n];
    const double d = delay(rng_);
    out.push_back({t, id, "freq_dev", old_f, twin.freq_dev[n], d});
    out.push_back({t, id, "power_dev", old_p, twin.power_dev[n], d});
  }
}

void TwinSynchronizer::refresh_uav(double t, TwinState& twin, const ActualParameters& truth,
                                   std::vector<SyncEvent>& out) {
  std::uniform_real_distribution<double> delay(0.0, schedule_.feedback_delay_s * 1000.0);
  const double d = delay(rng_);
  for (std::size_t k = 0; k < twin.uav_power_dev.size(); ++k) {
    const double old = twin.uav_power_dev[k];
    twin.uav_power_dev[k] = dynamics_.residual_fraction * old;
    twin.est_uav_power[k] = truth.uav_power[k] + twin.uav_power_dev[k];
    out.push_back({t, "uav", "power_dev[" + std::to_string(k) + "]", old, twin.uav_power_dev[k], d});
  }
}

std::vector<SyncEvent> TwinSynchronizer::tick(double sim_clock, TwinState& twin,
                                              const ActualParameters& truth) {
  if (sim_clock < clock_) throw std::invalid_argument("TwinSynchronizer: clock went backwards");
  if (twin.freq_dev.size() != truth.freq.size() || twin.uav_power_dev.size() != truth.uav_power.size()) {
    throw std::invalid_argument("TwinSynchronizer: twin/truth size mismatch");
  }
  std::vector<SyncEvent> events;
  // Boundaries are integer multiples of the periods; process them in time order.
  while (true) {
    const double t_tel = static_cast<double>(next_telemetry_) * schedule_.telemetry_period_s;
    const double t_usr = static_cast<double>(next_user_metrics_) * schedule_.user_metrics_period_s;
    const double next = std::min(t_tel, t_usr);
    if (next > sim_clock) break;
    drift(next - clock_, twin, truth);
    clock_ = next;
    if (t_tel <= next) {
      refresh_uav(next, twin, truth, events);
      ++next_telemetry_;
    }
    if (t_usr <= next) {
      refresh_users(next, twin, truth, events);
      ++next_user_metrics_;
    }
  }
  drift(sim_clock - clock_, twin, truth);
  clock_ = sim_clock;
  return events;
}

}  // namespace uavfl::twin
