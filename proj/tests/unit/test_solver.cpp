#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <limits>

#include "uavfl/sca/barrier_solver.hpp"

using namespace uavfl::sca;

TEST_CASE("active bound: minimize x^2 subject to x >= 1") {
  SubproblemSpec s;
  s.add_var("x", -10.0, 10.0);
  s.objective.add_square(1.0, {{{0, 1.0}}, 0.0});
  NamedConstraint c{"x>=1", {}};
  c.g.add_constant(1.0).add_linear(0, -1.0);
  s.constraints.push_back(c);
  const auto r = solve_convex(s, Eigen::VectorXd::Constant(1, 5.0));
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.max_violation <= 1e-6);
}

TEST_CASE("projection onto a half-plane") {
  SubproblemSpec s;
  s.add_var("x", -100.0, 100.0);
  s.add_var("y", -100.0, 100.0);
  s.objective.add_square(1.0, {{{0, 1.0}}, -2.0}).add_square(1.0, {{{1, 1.0}}, -3.0});
  NamedConstraint c{"x+y<=4", {}};
  c.g.add_linear(0, 1.0).add_linear(1, 1.0).add_constant(-4.0);
  s.constraints.push_back(c);
  // Start outside the feasible set to exercise phase I.
  const auto r = solve_convex(s, Eigen::Vector2d(10.0, 10.0));
  CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(r.phase1_iters > 0);
}

TEST_CASE("shrunken user block matches a grid search") {
  // minimize 0.5 f^2 + 0.8 q  s.t.  0.3/f + 0.2/q <= 1,  f, q in [0.01, 2]
  SubproblemSpec s;
  s.add_var("f", 0.01, 2.0);
  s.add_var("q", 0.01, 2.0);
  s.objective.add_square(0.5, {{{0, 1.0}}, 0.0}).add_linear(1, 0.8);
  NamedConstraint c{"latency", {}};
  c.g.add_reciprocal(0, 0.3).add_reciprocal(1, 0.2).add_constant(-1.0);
  s.constraints.push_back(c);
  const auto r = solve_convex(s, Eigen::Vector2d(1.0, 1.0));

  double best = std::numeric_limits<double>::infinity(), bf = 0, bq = 0;
  for (int i = 10; i <= 2000; ++i) {
    const double f = i * 1e-3;
    for (int j = 10; j <= 2000; ++j) {
      const double q = j * 1e-3;
      if (0.3 / f + 0.2 / q > 1.0) continue;
      const double v = 0.5 * f * f + 0.8 * q;
      if (v < best) best = v, bf = f, bq = q;
    }
  }
  CHECK(std::abs(r.x[0] - bf) <= 5e-3);
  CHECK(std::abs(r.x[1] - bq) <= 5e-3);
  CHECK(r.objective <= best + 1e-9);
}

TEST_CASE("errors are distinguishable") {
  SubproblemSpec s;
  s.add_var("x", 0.0, 1.0);
  s.objective.add_linear(0, 1.0);
  NamedConstraint c{"x>=2", {}};
  c.g.add_constant(2.0).add_linear(0, -1.0);
  s.constraints.push_back(c);
  try {
    solve_convex(s, Eigen::VectorXd::Constant(1, 0.5));
    FAIL("expected infeasibility");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::kInfeasible);
  }

  SubproblemSpec t;
  t.add_var("x", -10.0, 10.0);
  t.objective.add_square(1.0, {{{0, 1.0}}, -3.0});
  SolverOptions tight;
  tight.max_newton = 1;
  try {
    solve_convex(t, Eigen::VectorXd::Constant(1, 0.0), tight);
    FAIL("expected iteration limit");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::kMaxIterations);
  }
}

TEST_CASE("solve is deterministic") {
  SubproblemSpec s;
  s.add_var("x", 0.1, 5.0);
  s.add_var("y", 0.1, 5.0);
  s.objective.add_square(2.0, {{{0, 1.0}, {1, 1.0}}, -3.0}).add_reciprocal(1, 0.5);
  const auto a = solve_convex(s, Eigen::Vector2d(1, 1));
  const auto b = solve_convex(s, Eigen::Vector2d(1, 1));
  CHECK(a.x == b.x);
  CHECK(a.newton_iters == b.newton_iters);
}
