#include "doctest.h"

#include <stdexcept>
#include <random>
#include <set>

#include "uavfl/twin/compensation.hpp"
#include "uavfl/twin/sync.hpp"

using namespace uavfl;
using namespace uavfl::twin;

namespace {

model::UserProfile workload_1e7() {
  model::UserProfile u;
  u.data_size = 1000;
  u.cycles_per_sample = 1000;
  u.local_iters = 10;
  return u;
}

ActualParameters sample_actual() { return {{9e8, 5e8}, {0.2, 0.4}, {1.0, 2.0, 3.0}}; }

}  // namespace

TEST_CASE("estimated train time and latency gap") {
  const auto u = workload_1e7();
  CHECK(estimated_train_time(u, 1e9) == doctest::Approx(1.0e-2).epsilon(1e-14));
  CHECK(estimated_train_time(u, 2e9) == doctest::Approx(0.5e-2).epsilon(1e-14));
  CHECK_THROWS_AS(estimated_train_time(u, 0.0), std::domain_error);
  CHECK(latency_gap(u, 1e9, 1e8) == doctest::Approx(1e15 / 9e17).epsilon(1e-14));
  CHECK(latency_gap(u, 1e9, 0.0) == 0.0);
  CHECK(estimated_train_time(u, 1e9) + latency_gap(u, 1e9, 1e8) == doctest::Approx(1e7 / 9e8).epsilon(1e-14));
  CHECK_THROWS_AS(latency_gap(u, 1e9, 1e9), std::domain_error);
}

TEST_CASE("estimate plus gap equals actual time over random draws") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> est(1e6, 1e10), frac(0.0, 0.99), cyc(1e3, 1e12);
  for (int i = 0; i < 1000; ++i) {
    model::UserProfile u;
    u.data_size = 1;
    u.local_iters = 1;
    u.cycles_per_sample = cyc(rng);
    const double e = est(rng);
    const double d = frac(rng) * e;
    const double lhs = estimated_train_time(u, e) + latency_gap(u, e, d);
    CHECK(lhs == doctest::Approx(u.cycles_per_sample / (e - d)).epsilon(1e-12));
  }
}

TEST_CASE("compensate subtracts deviations") {
  const auto a = sample_actual();
  const auto exact = TwinState::exact(a);
  const auto back = compensate(exact);
  CHECK(back.freq == a.freq);
  CHECK(back.uav_power == a.uav_power);

  const auto t = TwinState::with_deviations({{9e8}, {0.1}, {1.0}}, std::vector<double>{1e8},
                                            std::vector<double>{0.0}, std::vector<double>{0.0});
  CHECK(t.est_freq[0] == 1e9);
  CHECK(compensate(t).freq[0] == doctest::Approx(9e8));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    const auto r = TwinState::with_random_deviations(a, 0.0, 0.5, static_cast<std::uint64_t>(i));
    const auto c = compensate(r);
    for (std::size_t n = 0; n < a.freq.size(); ++n) CHECK(c.freq[n] == doctest::Approx(a.freq[n]).epsilon(1e-14));
    for (std::size_t k = 0; k < a.uav_power.size(); ++k) {
      CHECK(c.uav_power[k] == doctest::Approx(a.uav_power[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("twin validation rejects non-positive actual values") {
  auto t = TwinState::exact(sample_actual());
  t.freq_dev[0] = t.est_freq[0];
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  auto s = TwinState::exact(sample_actual());
  s.power_dev.pop_back();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("deviation profile: compensated commands realize the plan") {
  const auto plan = sample_actual();
  const auto prof = DeviationProfile::random(2, 3, 0.0, 0.1, 17);
  const auto twin = twin_for_plan(plan, prof);
  const auto realized = realize({twin.est_freq, twin.est_power, twin.est_uav_power}, prof);
  for (std::size_t n = 0; n < 2; ++n) CHECK(realized.freq[n] == doctest::Approx(plan.freq[n]).epsilon(1e-14));
  const auto back = compensate(twin);
  for (std::size_t k = 0; k < 3; ++k) CHECK(back.uav_power[k] == doctest::Approx(plan.uav_power[k]).epsilon(1e-14));

  // The robust margin never under-delivers.
  const auto robust = realize(robust_commands(plan, 0.1), prof);
  for (std::size_t n = 0; n < 2; ++n) CHECK(robust.user_power[n] >= plan.user_power[n]);
  for (std::size_t k = 0; k < 3; ++k) CHECK(robust.uav_power[k] >= plan.uav_power[k]);

  CHECK_THROWS_AS(DeviationProfile::random(1, 1, 0.2, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(robust_commands(plan, 1.0), std::invalid_argument);
}

TEST_CASE("sync: one user-metrics refresh in 5 s") {
  SyncSchedule sch;
  DeviationDynamics dyn;
  TwinSynchronizer sync(sch, dyn, 1);
  auto twin = TwinState::with_random_deviations(sample_actual(), 0.05, 0.1, 3);
  const auto ev = sync.tick(5.0, twin, sample_actual());
  std::set<double> user_times, uav_times;
  for (const auto& e : ev) {
    (e.entity_id == "uav" ? uav_times : user_times).insert(e.sim_time_s);
    CHECK(e.delay_ms <= sch.feedback_delay_s * 1000.0);
  }
  CHECK(user_times == std::set<double>{5.0});
  CHECK(uav_times == std::set<double>{1.5, 3.0, 4.5});
}

TEST_CASE("sync: zero residual clears deviations, zero drift keeps them") {
  SyncSchedule sch;
  DeviationDynamics dyn;
  dyn.residual_fraction = 0.0;
  dyn.drift_std_fraction = 0.0;
  const auto truth = sample_actual();
  auto twin = TwinState::with_random_deviations(truth, 0.05, 0.1, 3);
  const auto before = twin;
  TwinSynchronizer s1(sch, dyn, 1);
  s1.tick(1.0, twin, truth);
  CHECK(twin.freq_dev == before.freq_dev);  // no refresh before t = 1.5, no drift
  s1.tick(5.0, twin, truth);
  for (double d : twin.freq_dev) CHECK(d == 0.0);
  for (double d : twin.uav_power_dev) CHECK(d == 0.0);
  CHECK_THROWS_AS(s1.tick(4.0, twin, truth), std::invalid_argument);
}

TEST_CASE("sync is deterministic for a seed") {
  SyncSchedule sch;
  DeviationDynamics dyn;
  const auto truth = sample_actual();
  auto run = [&] {
    auto twin = TwinState::with_random_deviations(truth, 0.05, 0.1, 3);
    TwinSynchronizer s(sch, dyn, 42);
    std::vector<double> out;
    for (double t : {0.7, 2.0, 6.1, 11.0}) {
      for (const auto& e : s.tick(t, twin, truth)) out.push_back(e.new_dev + e.delay_ms);
    }
    for (double d : twin.freq_dev) out.push_back(d);
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("schedule validation") {
  SyncSchedule s;
  CHECK_NOTHROW(s.validate());
  s.telemetry_period_s = 2.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
