#include "uavfl/sca/bcd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "uavfl/model/report.hpp"
#include "uavfl/sca/subproblem.hpp"
#include "uavfl/twin/compensation.hpp"

namespace uavfl::sca {
namespace {

using model::AllocationSolution;

// kPinnedTrajectory: both blocks, but the UAV block keeps the waypoints.
enum class Blocks { kBoth, kPinnedTrajectory, kUavOnly };

double energy_of(const AllocationSolution& s, std::span<const model::UserProfile> users,
                 const model::SystemConfig& cfg) {
  return model::round_totals(s, users, cfg).total_energy_j;
}

double violation_of(const AllocationSolution& s, std::span<const model::UserProfile> users,
                    const model::SystemConfig& cfg) {
  double worst = 0.0;
  for (const auto& r : model::constraint_residuals(s, users, cfg)) worst = std::max(worst, r.value);
  return worst;
}

// Re-linearize and solve one block until its energy stops improving.
// Returns Newton steps used; `sol` and `energy` are updated in place.
int solve_block(bool user_block, bool pin_trajectory, bool free_freq, AllocationSolution& sol, double& energy,
                std::span<const model::UserProfile> users, const model::SystemConfig& cfg,
                const BcdOptions& opt) {
  int newton = 0;
  for (int pass = 0; pass < opt.max_block_passes; ++pass) {
    const LinearizationPoint lin = tight_linearization(sol, users, cfg);
    const BuiltSubproblem sp = user_block ? build_subproblem1(users, sol, lin, cfg)
                                          : build_subproblem2(users, sol, lin, cfg, pin_trajectory, free_freq);
    const SolveResult r = solve_convex(sp.spec, sp.start, opt.solver);
    newton += r.newton_iters + r.phase1_iters;
    AllocationSolution cand = apply_solution(sp, r.x, sol);
    const double e = energy_of(cand, users, cfg);
    if (!(e < energy)) break;  // a restriction tight at `sol` cannot do better than `sol`
    const double rel = (energy - e) / std::max(std::abs(energy), 1e-300);
    sol = std::move(cand);
    energy = e;
    if (rel < opt.block_tol) break;
  }
  return newton;
}

BcdResult run(std::span<const model::UserProfile> users, const twin::TwinState& twin,
              const model::SystemConfig& cfg, const AllocationSolution& init, const BcdOptions& opt,
              Blocks blocks) {
  using clock = std::chrono::steady_clock;
  cfg.validate();
  model::check_dimensions(init, users.size(), cfg);
  if (twin.n_users() != users.size()) {
    throw std::invalid_argument("twin does not match the number of users");
  }
  BcdResult res;
  res.solution = init;
  double energy = users.empty() ? 0.0 : energy_of(init, users, cfg);
  const double v0 = violation_of(init, users, cfg);
  if (v0 > 1e-9) {
    throw BcdError(0, SolverError::Kind::kInfeasible,
                   "initial point violates the constraints by " + std::to_string(v0));
  }
  res.trace.rows.push_back({0, energy, v0, 0, 0.0});

  if (!users.empty()) {
    res.status = BcdStatus::kMaxIterations;
    for (int it = 1; it <= opt.max_outer; ++it) {
      const auto t0 = clock::now();
      AllocationSolution sol = res.solution;
      double e = energy;
      int newton = 0;
      try {
        const bool pinned = blocks == Blocks::kPinnedTrajectory;
        const bool users_move = blocks != Blocks::kUavOnly;
        if (users_move) newton += solve_block(true, pinned, false, sol, e, users, cfg, opt);
        newton += solve_block(false, pinned, users_move, sol, e, users, cfg, opt);
      } catch (const SolverError& err) {
        throw BcdError(it, err.kind(), err.what());
      }
      const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      res.outer_iterations = it;
      if (e > energy * (1.0 + 1e-9)) {
        res.status = BcdStatus::kStalled;
        break;
      }
      const double rel = (energy - e) / std::max(std::abs(energy), 1e-300);
      res.solution = std::move(sol);
      energy = e;
      res.trace.rows.push_back({it, energy, violation_of(res.solution, users, cfg), newton, ms});
      if (rel < opt.outer_tol) {
        res.status = BcdStatus::kConverged;
        break;
      }
    }
  }
  res.energy_j = energy;
  res.commanded = twin::commands_for(twin::actual_of(res.solution), twin);
  return res;
}

}  // namespace

const char* to_string(BcdStatus s) {
  switch (s) {
    case BcdStatus::kConverged: return "converged";
    case BcdStatus::kMaxIterations: return "max_iterations";
    case BcdStatus::kStalled: return "stalled";
  }
  return "unknown";
}

AllocationSolution default_initialization(std::size_t n_users, const model::SystemConfig& cfg) {
  AllocationSolution s;
  s.trajectory = model::straight_line_trajectory(cfg);
  s.freq.assign(n_users, 0.5 * cfg.f_max_hz);
  s.user_power.assign(n_users, 0.5 * cfg.q_max_w);
  s.uav_power.assign(cfg.k_slots, 0.5 * std::min(cfg.q_uav_max_w, cfg.avg_power_w));
  return s;
}

BcdResult bcd_optimize(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                       const model::SystemConfig& cfg, const AllocationSolution& init,
                       const BcdOptions& options) {
  return run(users, twin, cfg, init, options, Blocks::kBoth);
}

BcdResult baseline_fixed_trajectory(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                                    const model::SystemConfig& cfg, const BcdOptions& options) {
  return run(users, twin, cfg, default_initialization(users.size(), cfg), options, Blocks::kPinnedTrajectory);
}

BcdResult baseline_fixed_allocation(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                                    const model::SystemConfig& cfg, const BcdOptions& options) {
  return run(users, twin, cfg, default_initialization(users.size(), cfg), options, Blocks::kUavOnly);
}

}  // namespace uavfl::sca
