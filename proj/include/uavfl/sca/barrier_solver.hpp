#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "uavfl/sca/convex_function.hpp"

namespace uavfl::sca {

struct SolverOptions {
  double gap_rel_tol = 1e-10;  ///< stop when m/t < tol * |objective|
  double mu = 20.0;            ///< barrier parameter growth
  double newton_tol = 1e-10;   ///< centering stops when lambda^2/2 drops below
  int max_newton = 3000;       ///< total Newton steps over both phases
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { kInfeasible, kMaxIterations, kNumerical };

  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SolveResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double max_violation = 0.0;  ///< max over constraints of g_i(x) / scale_i
  double stationarity = 0.0;   ///< infinity norm of the scaled Lagrangian gradient
  int newton_iters = 0;
  int phase1_iters = 0;
};

/// Log-barrier interior-point method. A phase-I problem (minimize s subject
/// to g_i(x) <= s) finds a strictly feasible start unless `init` is one.
/// Iterates stay strictly feasible, so the result satisfies every constraint.
/// Throws SolverError; deterministic for a given (spec, init, options).
SolveResult solve_convex(const SubproblemSpec& spec, const Eigen::VectorXd& init,
                         const SolverOptions& options = {});

}  // namespace uavfl::sca
