#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavfl/model/config.hpp"
#include "uavfl/sca/barrier_solver.hpp"
#include "uavfl/twin/twin_state.hpp"

namespace uavfl::sca {

struct BcdOptions {
  double outer_tol = 1e-3;     ///< stop when the relative energy decrease drops below
  int max_outer = 30;
  double block_tol = 1e-7;     ///< per-block re-linearization stops below this relative decrease
  int max_block_passes = 60;
  SolverOptions solver;
};

enum class BcdStatus { kConverged, kMaxIterations, kStalled };

const char* to_string(BcdStatus s);

struct TraceRow {
  int outer_iter = 0;
  double energy_j = 0.0;
  double feas_residual = 0.0;  ///< largest positive constraint residual
  int inner_iters = 0;         ///< Newton steps spent in this outer iteration
  double ms = 0.0;
};

/// Row 0 is the initial point; row i the state after outer iteration i.
struct SolveTrace {
  std::vector<TraceRow> rows;
};

struct BcdResult {
  model::AllocationSolution solution;
  SolveTrace trace;
  BcdStatus status = BcdStatus::kConverged;
  int outer_iterations = 0;
  double energy_j = 0.0;
  twin::TwinState commanded;  ///< estimates to command so that the twin realizes `solution`
};

class BcdError : public std::runtime_error {
 public:
  BcdError(int iteration, SolverError::Kind kind, const std::string& what)
      : std::runtime_error("outer iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration),
        kind_(kind) {}

  int iteration() const { return iteration_; }
  SolverError::Kind kind() const { return kind_; }

 private:
  int iteration_;
  SolverError::Kind kind_;
};

/// Straight-line trajectory, f = f_max/2, q = q_max/2, q_uav = min(q_uav_max, avg cap)/2.
model::AllocationSolution default_initialization(std::size_t n_users, const model::SystemConfig& cfg);

/// Block coordinate descent: user block, then UAV block, each solved by
/// repeated convexification until its energy stalls. The twin supplies
/// deviations for the commanded estimates only; the energy problem itself is
/// posed in actual quantities. Throws BcdError (iteration 0 for an infeasible init).
BcdResult bcd_optimize(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                       const model::SystemConfig& cfg, const model::AllocationSolution& init,
                       const BcdOptions& options = {});

/// Waypoints pinned to the straight start-to-end line; user variables and
/// UAV powers are still optimized.
BcdResult baseline_fixed_trajectory(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                                    const model::SystemConfig& cfg, const BcdOptions& options = {});

/// f and q pinned at mid-range; only the UAV block moves.
BcdResult baseline_fixed_allocation(std::span<const model::UserProfile> users, const twin::TwinState& twin,
                                    const model::SystemConfig& cfg, const BcdOptions& options = {});

}  // namespace uavfl::sca
