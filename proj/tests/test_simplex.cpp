#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "rismm/conic/ipm.hpp"
#include "rismm/lp/simplex.hpp"
#include "rismm/rng.hpp"

using namespace rismm;

TEST_CASE("box lp: hand-checked instance") {
  // max 3x + 2y  s.t.  x + y = 1.5,  0 <= x, y <= 1  ->  x = 1, y = 0.5
  Eigen::MatrixXd e(1, 2);
  e << 1, 1;
  Eigen::VectorXd f(1);
  f << 1.5;
  Eigen::VectorXd c(2);
  c << 3, 2;
  auto sol = solve_box_lp(e, f, c, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  REQUIRE(sol.status == LpStatus::optimal);
  REQUIRE(sol.objective == Catch::Approx(4.0).margin(1e-9));
  REQUIRE(sol.x(0) == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(sol.x(1) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("box lp: infeasible row is detected") {
  Eigen::MatrixXd e(1, 2);
  e << 1, 1;
  Eigen::VectorXd f(1);
  f << 5.0;  // beyond the box
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2);
  auto sol = solve_box_lp(e, f, c, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  REQUIRE(sol.status == LpStatus::infeasible);
}

TEST_CASE("box lp: fixed variables via equal bounds") {
  Eigen::MatrixXd e(1, 3);
  e << 1, 1, 1;
  Eigen::VectorXd f(1);
  f << 2.0;
  Eigen::VectorXd c(3);
  c << 5, 1, 1;
  Eigen::VectorXd lo(3), hi(3);
  lo << 0, 1, 0;
  hi << 1, 1, 1;  // middle variable pinned at 1
  auto sol = solve_box_lp(e, f, c, lo, hi);
  REQUIRE(sol.status == LpStatus::optimal);
  REQUIRE(sol.x(1) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(sol.objective == Catch::Approx(6.0).margin(1e-9));
}

TEST_CASE("box lp agrees with the interior-point core on random instances") {
  Rng rng(77);
  for (int inst = 0; inst < 40; ++inst) {
    const int m = 2 + rng.uniform_int(3);
    const int n = m + 1 + rng.uniform_int(5);
    Eigen::MatrixXd e(m, n);
    Eigen::VectorXd x0(n), c(n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) e(i, j) = rng.normal();
    // feasible interior point keeps the instance feasible
    for (int j = 0; j < n; ++j) x0(j) = 0.2 + 0.6 * rng.uniform();
    for (int j = 0; j < n; ++j) c(j) = rng.normal();
    Eigen::VectorXd f = e * x0;

    auto lp = solve_box_lp(e, f, c, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
    REQUIRE(lp.status == LpStatus::optimal);

    // Same LP in conic standard form: x and the upper-bound slacks.
    ConicProblem cp;
    cp.a = Eigen::MatrixXd::Zero(m + n, 2 * n);
    cp.a.topLeftCorner(m, n) = e;
    cp.a.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    cp.a.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    cp.b.resize(m + n);
    cp.b.head(m) = f;
    cp.b.tail(n) = Eigen::VectorXd::Ones(n);
    cp.c = Eigen::VectorXd::Zero(2 * n);
    cp.c.head(n) = -c;
    cp.cones = {{ConeKind::nonneg, 2 * n}};
    auto ip = solve_conic(cp);
    REQUIRE(ip.status == IpmStatus::optimal);
    REQUIRE(lp.objective == Catch::Approx(-ip.primal_obj).margin(1e-5));
  }
}
