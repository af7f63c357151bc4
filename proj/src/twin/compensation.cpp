#include "uavfl/twin/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uavfl/common/seed.hpp"

namespace uavfl::twin {
namespace {

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("twin size mismatch: ") + what);
}

std::vector<double> subtract(const std::vector<double>& est, const std::vector<double>& dev) {
  std::vector<double> out(est.size());
  std::transform(est.begin(), est.end(), dev.begin(), out.begin(), std::minus<>());
  return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  std::transform(a.begin(), a.end(), b.begin(), out.begin(), std::plus<>());
  return out;
}

}  // namespace

void TwinState::validate() const {
  check_same(est_freq.size(), freq_dev.size(), "freq");
  check_same(est_power.size(), power_dev.size(), "power");
  check_same(est_freq.size(), est_power.size(), "users");
  check_same(est_uav_power.size(), uav_power_dev.size(), "uav power");
  auto positive = [](const std::vector<double>& e, const std::vector<double>& d, const char* what) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!(e[i] - d[i] > 0.0)) {
        throw std::invalid_argument(std::string("twin actual value must be > 0: ") + what);
      }
    }
  };
  positive(est_freq, freq_dev, "freq");
  positive(est_power, power_dev, "power");
  positive(est_uav_power, uav_power_dev, "uav power");
}

TwinState TwinState::exact(const ActualParameters& actual) {
  TwinState t;
  t.est_freq = actual.freq;
  t.freq_dev.assign(actual.freq.size(), 0.0);
  t.est_power = actual.user_power;
  t.power_dev.assign(actual.user_power.size(), 0.0);
  t.est_uav_power = actual.uav_power;
  t.uav_power_dev.assign(actual.uav_power.size(), 0.0);
  return t;
}

TwinState TwinState::with_deviations(const ActualParameters& actual, std::span<const double> freq_dev,
                                     std::span<const double> power_dev,
                                     std::span<const double> uav_power_dev) {
  check_same(actual.freq.size(), freq_dev.size(), "freq deviation");
  check_same(actual.user_power.size(), power_dev.size(), "power deviation");
  check_same(actual.uav_power.size(), uav_power_dev.size(), "uav power deviation");
  TwinState t;
  t.est_freq = add(actual.freq, freq_dev);
  t.freq_dev.assign(freq_dev.begin(), freq_dev.end());
  t.est_power = add(actual.user_power, power_dev);
  t.power_dev.assign(power_dev.begin(), power_dev.end());
  t.est_uav_power = add(actual.uav_power, uav_power_dev);
  t.uav_power_dev.assign(uav_power_dev.begin(), uav_power_dev.end());
  return t;
}

TwinState TwinState::with_random_deviations(const ActualParameters& actual, double min_fraction,
                                            double max_fraction, std::uint64_t seed) {
  if (min_fraction > max_fraction) throw std::invalid_argument("min_fraction > max_fraction");
  std::mt19937_64 rng(sub_seed(seed, "twin-deviation"));
  std::uniform_real_distribution<double> frac(min_fraction, max_fraction);
  auto draw = [&](const std::vector<double>& a) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = frac(rng) * a[i];
    return d;
  };
  const auto fd = draw(actual.freq);
  const auto pd = draw(actual.user_power);
  const auto ud = draw(actual.uav_power);
  return with_deviations(actual, fd, pd, ud);
}

double estimated_train_time(const model::UserProfile& user, double est_freq) {
  if (!(est_freq > 0.0)) throw std::domain_error("estimated_train_time: estimate must be > 0");
  return user.total_cycles() / est_freq;
}

double latency_gap(const model::UserProfile& user, double est_freq, double freq_dev) {
  const double actual = est_freq - freq_dev;
  if (!(actual > 0.0) || !(est_freq > 0.0)) {
    throw std::domain_error("latency_gap: estimate must exceed deviation");
  }
  return user.total_cycles() * freq_dev / (est_freq * actual);
}

ActualParameters compensate(const TwinState& twin) {
  twin.validate();
  return {subtract(twin.est_freq, twin.freq_dev), subtract(twin.est_power, twin.power_dev),
          subtract(twin.est_uav_power, twin.uav_power_dev)};
}

TwinState commands_for(const ActualParameters& actual, const TwinState& deviations) {
  return TwinState::with_deviations(actual, deviations.freq_dev, deviations.power_dev,
                                    deviations.uav_power_dev);
}

ActualParameters actual_of(const model::AllocationSolution& solution) {
  return {solution.freq, solution.user_power, solution.uav_power};
}

void DeviationProfile::validate() const {
  for (const auto* v : {&freq, &user_power, &uav_power}) {
    for (double f : *v) {
      if (!(f >= 0.0 && f < 1.0)) throw std::invalid_argument("deviation fraction must lie in [0, 1)");
    }
  }
}

DeviationProfile DeviationProfile::random(std::size_t n_users, std::size_t k_slots, double lo, double hi,
                                          std::uint64_t seed) {
  if (!(lo >= 0.0 && lo <= hi && hi < 1.0)) throw std::invalid_argument("deviation range must satisfy 0 <= lo <= hi < 1");
  std::mt19937_64 rng(sub_seed(seed, "deviation-profile"));
  std::uniform_real_distribution<double> frac(lo, hi);
  auto draw = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& f : v) f = lo == hi ? lo : frac(rng);
    return v;
  };
  DeviationProfile p;
  p.freq = draw(n_users);
  p.user_power = draw(n_users);
  p.uav_power = draw(k_slots);
  return p;
}

namespace {

ActualParameters scale_each(const ActualParameters& a, const DeviationProfile& p, bool divide) {
  check_same(a.freq.size(), p.freq.size(), "freq profile");
  check_same(a.user_power.size(), p.user_power.size(), "power profile");
  check_same(a.uav_power.size(), p.uav_power.size(), "uav power profile");
  auto apply = [divide](const std::vector<double>& v, const std::vector<double>& f) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = divide ? v[i] / (1.0 - f[i]) : v[i] * (1.0 - f[i]);
    return out;
  };
  return {apply(a.freq, p.freq), apply(a.user_power, p.user_power), apply(a.uav_power, p.uav_power)};
}

}  // namespace

TwinState twin_for_plan(const ActualParameters& plan, const DeviationProfile& profile) {
  profile.validate();
  const ActualParameters est = scale_each(plan, profile, true);
  return TwinState::with_deviations(plan, subtract(est.freq, plan.freq), subtract(est.user_power, plan.user_power),
                                    subtract(est.uav_power, plan.uav_power));
}

ActualParameters realize(const ActualParameters& commands, const DeviationProfile& profile) {
  profile.validate();
  return scale_each(commands, profile, false);
}

ActualParameters robust_commands(const ActualParameters& plan, double worst_fraction) {
  if (!(worst_fraction >= 0.0 && worst_fraction < 1.0)) throw std::invalid_argument("worst_fraction must lie in [0, 1)");
  auto up = [worst_fraction](std::vector<double> v) {
    for (auto& x : v) x /= 1.0 - worst_fraction;
    return v;
  };
  return {up(plan.freq), up(plan.user_power), up(plan.uav_power)};
}

}  // namespace uavfl::twin
