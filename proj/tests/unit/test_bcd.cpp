#include "doctest.h"

#include <stdexcept>
#include <cmath>

#include "uavfl/model/report.hpp"
#include "uavfl/sca/bcd.hpp"
#include "uavfl/twin/compensation.hpp"

using namespace uavfl;
using namespace uavfl::sca;

namespace {

struct Run {
  model::SystemConfig cfg;
  std::vector<model::UserProfile> users;
  model::AllocationSolution init;
  twin::TwinState twin;

  explicit Run(std::uint64_t seed, std::size_t n = 3) {
    cfg.n_users = n;
    users = model::generate_users(cfg, model::UserGenerator{}, seed);
    init = default_initialization(n, cfg);
    twin = twin::TwinState::exact(twin::actual_of(init));
  }
};

}  // namespace

TEST_CASE("three users: monotone, converged, feasible, deterministic") {
  Run r(1);
  const auto res = bcd_optimize(r.users, r.twin, r.cfg, r.init);
  REQUIRE(res.trace.rows.size() >= 2);
  CHECK(res.trace.rows.front().outer_iter == 0);
  for (std::size_t i = 1; i < res.trace.rows.size(); ++i) {
    CHECK(res.trace.rows[i].energy_j <= res.trace.rows[i - 1].energy_j * (1 + 1e-9));
  }
  CHECK(res.status == BcdStatus::kConverged);
  CHECK(res.outer_iterations <= 20);
  CHECK(res.energy_j == doctest::Approx(model::round_totals(res.solution, r.users, r.cfg).total_energy_j));
  CHECK(model::round_totals(res.solution, r.users, r.cfg).max_violation() <= 1e-6);
  // Commands realize the solution under the twin's deviations.
  const auto back = twin::compensate(res.commanded);
  CHECK(back.freq == res.solution.freq);

  const auto again = bcd_optimize(r.users, r.twin, r.cfg, r.init);
  REQUIRE(again.trace.rows.size() == res.trace.rows.size());
  for (std::size_t i = 0; i < res.trace.rows.size(); ++i) {
    CHECK(again.trace.rows[i].energy_j == res.trace.rows[i].energy_j);
  }
}

TEST_CASE("restarting at the optimum stops after one iteration") {
  Run r(2);
  const auto first = bcd_optimize(r.users, r.twin, r.cfg, r.init);
  const auto tw = twin::TwinState::exact(twin::actual_of(first.solution));
  const auto second = bcd_optimize(r.users, tw, r.cfg, first.solution);
  CHECK(second.outer_iterations == 1);
  CHECK(second.energy_j <= first.energy_j);
  CHECK((first.energy_j - second.energy_j) / first.energy_j < 1e-3);
}

TEST_CASE("baselines never beat the joint optimum") {
  Run r(3);
  const auto joint = bcd_optimize(r.users, r.twin, r.cfg, r.init);
  const auto ft = baseline_fixed_trajectory(r.users, r.twin, r.cfg);
  const auto fa = baseline_fixed_allocation(r.users, r.twin, r.cfg);
  CHECK(joint.energy_j <= ft.energy_j);
  CHECK(joint.energy_j <= fa.energy_j);
  CHECK(ft.solution.trajectory.waypoints == model::straight_line_trajectory(r.cfg).waypoints);
  CHECK(fa.solution.freq == r.init.freq);
  CHECK(fa.solution.user_power == r.init.user_power);
}

TEST_CASE("no users gives zero energy") {
  Run r(4, 0);
  CHECK(bcd_optimize(r.users, r.twin, r.cfg, r.init).energy_j == 0.0);
  CHECK(baseline_fixed_trajectory(r.users, r.twin, r.cfg).energy_j == 0.0);
  CHECK(baseline_fixed_allocation(r.users, r.twin, r.cfg).energy_j == 0.0);
}

TEST_CASE("infeasible initial point is reported at iteration 0") {
  Run r(5);
  auto bad = r.init;
  bad.freq[0] = 2 * r.cfg.f_max_hz;
  try {
    bcd_optimize(r.users, r.twin, r.cfg, bad);
    FAIL("expected BcdError");
  } catch (const BcdError& e) {
    CHECK(e.iteration() == 0);
  }
}
