#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <random>

#include "uavfl/model/config.hpp"
#include "uavfl/model/physics.hpp"
#include "uavfl/model/report.hpp"

using namespace uavfl::model;

namespace {

SystemConfig base_cfg() {
  SystemConfig c;
  c.ref_gain = 1e-3;
  c.altitude_m = 50.0;
  c.bandwidth_hz = 1e6;
  c.noise_psd_dbm_hz = -174.0;
  return c;
}

// Independent long-double evaluation of B*log2(1 + beta0*q/d2).
long double oracle_rate(long double q, long double d2) {
  const long double noise_w = std::pow(10.0L, -17.4L) * 1e-3L * 1e6L;
  const long double beta0 = 1e-3L / noise_w;
  return 1e6L * std::log2(1.0L + beta0 * q / d2);
}

UserProfile user_at(Vec2 p) {
  UserProfile u;
  u.pos = p;
  u.data_size = 1000;
  u.cycles_per_sample = 1000;
  u.local_iters = 10;
  u.upload_bits = 1e6;
  u.model_bits = 1e6;
  return u;
}

}  // namespace

TEST_CASE("channel gain examples") {
  const auto c = base_cfg();
  CHECK(channel_gain({0, 0}, {0, 0}, c) == doctest::Approx(4.0e-7).epsilon(1e-12));
  CHECK(channel_gain({12.5, -3}, {12.5, -3}, c) == channel_gain({0, 0}, {0, 0}, c));
  CHECK(channel_gain({30, 40}, {0, 0}, c) == doctest::Approx(1e-3 / 5000.0).epsilon(1e-12));
}

TEST_CASE("uplink and downlink rates") {
  const auto c = base_cfg();
  CHECK(uplink_rate({0, 0}, {0, 0}, 0.0, c) == 0.0);
  const double r = link_rate(2500.0, 0.1, c);
  CHECK(r == doctest::Approx(static_cast<double>(oracle_rate(0.1L, 2500.0L))).epsilon(1e-12));
  CHECK(r == doctest::Approx(2.326e7).epsilon(1e-3));
  CHECK(downlink_rate({0, 0}, {0, 0}, 0.1, c) == uplink_rate({0, 0}, {0, 0}, 0.1, c));
  // High SNR: doubling d2 costs about one bit per Hz.
  CHECK(link_rate(2500.0, 0.1, c) - link_rate(5000.0, 0.1, c) == doctest::Approx(1e6).epsilon(1e-6));
}

TEST_CASE("rate monotonicity over random samples") {
  const auto c = base_cfg();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> q(1e-6, 10.0), d2(2500.0, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const double a = q(rng), dd = d2(rng);
    CHECK(link_rate(dd, a * 1.01, c) > link_rate(dd, a, c));
    CHECK(link_rate(dd * 1.01, a, c) < link_rate(dd, a, c));
  }
}

TEST_CASE("training time and energy") {
  const auto c = base_cfg();
  const auto u = user_at({0, 0});
  const auto p = train_time_energy(u, 1e9, c);
  CHECK(p.joules == doctest::Approx(1.0e-3).epsilon(1e-12));
  CHECK(p.seconds == doctest::Approx(1.0e-2).epsilon(1e-12));
  const auto p2 = train_time_energy(u, 2e9, c);
  CHECK(p2.joules == doctest::Approx(4 * p.joules).epsilon(1e-12));
  CHECK(p2.seconds == doctest::Approx(p.seconds / 2).epsilon(1e-12));
  auto empty = u;
  empty.data_size = 0;
  CHECK(train_time_energy(empty, 1e9, c).joules == 0.0);
  CHECK_THROWS_AS(train_time_energy(u, 0.0, c), std::domain_error);
  for (double k : {0.3, 1.7, 5.0}) {
    CHECK(train_time_energy(u, k * 1e8, c).joules == doctest::Approx(k * k * train_time_energy(u, 1e8, c).joules));
  }
}

TEST_CASE("upload and download time and energy") {
  const auto c = base_cfg();
  const auto u = user_at({0, 0});
  const auto up = upload_time_energy(u, 0.1, {0, 0}, c);
  const double rate = static_cast<double>(oracle_rate(0.1L, 2500.0L));
  CHECK(up.seconds == doctest::Approx(1e6 / rate).epsilon(1e-12));
  CHECK(up.seconds == doctest::Approx(4.30e-2).epsilon(2e-3));
  CHECK(up.joules == doctest::Approx(4.30e-3).epsilon(2e-3));
  CHECK(up.joules / up.seconds == doctest::Approx(0.1));
  auto zero = u;
  zero.upload_bits = 0;
  CHECK(upload_time_energy(zero, 0.1, {0, 0}, c).joules == 0.0);
  CHECK_THROWS_AS(upload_time_energy(u, 0.0, {0, 0}, c), std::domain_error);
  const auto down = download_time_energy(u, 0.1, {0, 0}, c);
  CHECK(down.seconds == doctest::Approx(up.seconds));
  CHECK(down.joules == doctest::Approx(up.joules));
}

TEST_CASE("round totals aggregate per-phase values") {
  auto c = base_cfg();
  c.n_users = 1;
  c.k_slots = 1;
  c.start_pos = {0, 0};
  c.end_pos = {0, 0};
  const std::vector<UserProfile> users{user_at({0, 0})};
  AllocationSolution s;
  s.trajectory.waypoints = {{0, 0}};
  s.freq = {1e9};
  s.user_power = {0.1};
  s.uav_power = {0.1};
  const auto rep = round_totals(s, users, c);
  const double down = download_time_energy(users[0], 0.1, {0, 0}, c).joules;
  CHECK(rep.total_energy_j == doctest::Approx(1.0e-3 + 1e6 / static_cast<double>(oracle_rate(0.1L, 2500.0L)) * 0.1 + down));
  CHECK(rep.total_latency_s == doctest::Approx(rep.users[0].latency_s()));

  // Two identical users cost exactly twice one user.
  c.n_users = 2;
  const std::vector<UserProfile> two{users[0], users[0]};
  s.freq = {1e9, 1e9};
  s.user_power = {0.1, 0.1};
  const auto rep2 = round_totals(s, two, c);
  CHECK(rep2.total_energy_j == doctest::Approx(2 * rep.total_energy_j).epsilon(1e-15));
  CHECK(rep2.total_latency_s == doctest::Approx(rep.total_latency_s));
}

TEST_CASE("round totals consistency on random solutions") {
  auto c = base_cfg();
  const auto users = generate_users(c, UserGenerator{}, 3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> frac(0.05, 1.0), pos(0.0, 70.0);
  for (int trial = 0; trial < 50; ++trial) {
    AllocationSolution s;
    for (std::size_t k = 0; k < c.k_slots; ++k) {
      s.trajectory.waypoints.push_back({pos(rng), pos(rng)});
      s.uav_power.push_back(frac(rng) * c.q_uav_max_w);
    }
    for (std::size_t n = 0; n < c.n_users; ++n) {
      s.freq.push_back(frac(rng) * c.f_max_hz);
      s.user_power.push_back(frac(rng) * c.q_max_w);
    }
    const auto rep = round_totals(s, users, c);
    double total = 0.0, lat = 0.0;
    for (std::size_t n = 0; n < users.size(); ++n) {
      const auto tr = train_time_energy(users[n], s.freq[n], c);
      double up_s = 0, up_j = 0, down_s = 0, down_j = 0;
      for (std::size_t k = 0; k < c.k_slots; ++k) {
        const auto u = upload_time_energy(users[n], s.user_power[n], s.trajectory.waypoints[k], c);
        const auto d = download_time_energy(users[n], s.uav_power[k], s.trajectory.waypoints[k], c);
        if (u.seconds > up_s) up_s = u.seconds, up_j = u.joules;
        if (d.joules > down_j) down_j = d.joules, down_s = d.seconds;
      }
      total += tr.joules + up_j + down_j;
      lat = std::max(lat, tr.seconds + up_s + down_s);
    }
    CHECK(rep.total_energy_j == doctest::Approx(total).epsilon(1e-12));
    CHECK(rep.total_latency_s == doctest::Approx(lat).epsilon(1e-12));
  }
}

TEST_CASE("constraint residuals") {
  auto c = base_cfg();
  c.n_users = 1;
  const std::vector<UserProfile> users{user_at({10, 10})};
  AllocationSolution s;
  s.trajectory = straight_line_trajectory(c);
  s.freq = {c.f_max_hz};
  s.user_power = {1.0};
  s.uav_power.assign(c.k_slots, 1.0);
  auto find = [](const std::vector<Residual>& r, const std::string& name) {
    for (const auto& x : r) {
      if (x.name == name) return x.value;
    }
    FAIL("missing residual " << name);
    return 0.0;
  };
  auto r = constraint_residuals(s, users, c);
  CHECK(find(r, "f_hi[0]") == 0.0);
  s.freq = {1.1 * c.f_max_hz};
  r = constraint_residuals(s, users, c);
  CHECK(find(r, "f_hi[0]") == doctest::Approx(0.1 * c.f_max_hz));
  CHECK(r.size() == 4 + 2 * c.k_slots + 1 + 1 + (c.k_slots + 1));
  CHECK_THROWS_AS(check_dimensions(s, 2, c), std::invalid_argument);
}

TEST_CASE("config validation") {
  SystemConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.max_step_m() == c.v_max_mps * c.slot_len_s);
  CHECK(c.beta0() == doctest::Approx(c.ref_gain / c.noise_power_w()));
  c.q_max_w = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SystemConfig{};
  c.end_pos = {1e9, 0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("straight line trajectory is evenly spaced") {
  SystemConfig c;
  const auto t = straight_line_trajectory(c);
  REQUIRE(t.waypoints.size() == c.k_slots);
  const double step = 70.0 / static_cast<double>(c.k_slots + 1);
  for (std::size_t k = 0; k < c.k_slots; ++k) {
    CHECK(t.waypoints[k].x == doctest::Approx(step * static_cast<double>(k + 1)));
    CHECK(t.waypoints[k].y == doctest::Approx(step * static_cast<double>(k + 1)));
  }
}
