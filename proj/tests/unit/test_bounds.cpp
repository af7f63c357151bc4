#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <random>

#include "uavfl/sca/bounds.hpp"
#include "uavfl/sca/convex_function.hpp"

using namespace uavfl::sca;

TEST_CASE("taylor_lower_square") {
  CHECK(taylor_lower_square(2.0, 2.0) == 4.0);
  const auto f = taylor_lower_square(1.0);
  CHECK(f.slope == 2.0);
  CHECK(f.intercept == -1.0);
  CHECK(f(3.0) == 5.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = d(rng), ui = d(rng);
    if (taylor_lower_square(u, ui) > u * u * (1 + 1e-15)) ++violations;
    CHECK(taylor_lower_square(ui, ui) == doctest::Approx(ui * ui).epsilon(1e-12));
  }
  CHECK(violations == 0);
}

TEST_CASE("log_lower_bound") {
  CHECK(log_lower_bound(1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_lower_bound(3.0, 1.0) == doctest::Approx(std::log(2.0) + 0.5 - 1.0 / 6.0).epsilon(1e-15));
  CHECK(log_lower_bound(3.0, 1.0) <= std::log(4.0));
  CHECK_THROWS_AS(log_lower_bound(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_lower_bound(1.0, -1.0), std::domain_error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> e(-8.0, 8.0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = std::pow(10.0, e(rng)), ti = std::pow(10.0, e(rng));
    if (log_lower_bound(t, ti) > std::log1p(t) + 1e-12 * std::max(1.0, std::log1p(t))) ++violations;
    CHECK(log_lower_bound(ti, ti) == doctest::Approx(std::log1p(ti)).epsilon(1e-12));
  }
  CHECK(violations == 0);
}

TEST_CASE("amgm_upper_bilinear") {
  CHECK(amgm_upper_bilinear(2, 3, 2, 3) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(amgm_upper_bilinear(1, 4, 1, 1) == doctest::Approx(8.5).epsilon(1e-15));
  CHECK_THROWS_AS(amgm_upper_bilinear(1, 1, 0, 1), std::domain_error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-6.0, 6.0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::pow(10.0, e(rng)), b = std::pow(10.0, e(rng));
    const double ai = std::pow(10.0, e(rng)), bi = std::pow(10.0, e(rng));
    if (amgm_upper_bilinear(a, b, ai, bi) < a * b * (1 - 1e-15)) ++violations;
    CHECK(amgm_upper_bilinear(ai, bi, ai, bi) == doctest::Approx(ai * bi).epsilon(1e-12));
  }
  CHECK(violations == 0);
}

TEST_CASE("bilinear restriction bounds -ab and is tight") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double ai = std::pow(10.0, e(rng)), bi = std::pow(10.0, e(rng));
    ConvexFunction f;
    f.add_bilinear_restriction(0, 1, ai, bi);
    Eigen::Vector2d x(std::pow(10.0, e(rng)), std::pow(10.0, e(rng)));
    CHECK(f.value(x) >= -x[0] * x[1] - 1e-12 * std::abs(x[0] * x[1]));
    CHECK(f.value(Eigen::Vector2d(ai, bi)) == doctest::Approx(-ai * bi).epsilon(1e-12));
  }
}

TEST_CASE("convex function gradient and hessian match finite differences") {
  ConvexFunction f;
  f.add_constant(1.5).add_linear(0, 2.0).add_square(0.5, {{{0, 1.0}, {2, -2.0}}, 0.3});
  f.add_reciprocal(1, 4.0).add_bilinear_restriction(0, 2, 1.2, 0.7);
  const Eigen::Vector3d x(0.9, 1.3, 0.4);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
  f.add_gradient(x, 1.0, g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  f.add_hessian(x, 1.0, h);
  const double eps = 1e-6;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += eps;
    xm[j] -= eps;
    CHECK(g[j] == doctest::Approx((f.value(xp) - f.value(xm)) / (2 * eps)).epsilon(1e-6));
    Eigen::VectorXd gp = Eigen::VectorXd::Zero(3), gm = Eigen::VectorXd::Zero(3);
    f.add_gradient(xp, 1.0, gp);
    f.add_gradient(xm, 1.0, gm);
    for (int i = 0; i < 3; ++i) CHECK(h(i, j) == doctest::Approx((gp[i] - gm[i]) / (2 * eps)).epsilon(1e-5));
  }
  CHECK(f.support() == std::vector<std::size_t>{0, 1, 2});
  CHECK(f.max_index() == 3);
  CHECK_FALSE(f.in_domain(Eigen::Vector3d(1, 0, 1)));
}

TEST_CASE("spec validation") {
  SubproblemSpec s;
  s.add_var("x", 0.0, 1.0);
  s.objective.add_linear(1, 1.0);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  SubproblemSpec t;
  t.add_var("x", 2.0, 1.0);
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
