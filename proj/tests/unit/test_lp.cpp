#include <doctest.h>

#include <cmath>

#include "nnpart/errors.hpp"
#include "nnpart/lp.hpp"
#include "nnpart/rng.hpp"

using namespace nnpart;

namespace {

LinearProgram box_lp(Eigen::Index dim, double lo, double hi) {
  LinearProgram lp(dim);
  lp.lower.setConstant(lo);
  lp.upper.setConstant(hi);
  return lp;
}

}  // namespace

TEST_CASE("box vertex maximizes a coordinate") {
  LinearProgram lp = box_lp(3, -2.0, 2.0);
  lp.objective << 1.0, 0.0, 0.0;
  const LpResult r = solve_lp(lp, Goal::Maximize);
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.point[0] == doctest::Approx(2.0));
}

TEST_CASE("simplex distribution with Mv >= 0") {
  // M = [[0, 1], [-0.5, 0]]: only v = (0, 1) works.
  LinearProgram lp = box_lp(2, 0.0, std::numeric_limits<double>::infinity());
  lp.add(Eigen::Vector2d(0.0, 1.0), Sense::GreaterEqual, 0.0);
  lp.add(Eigen::Vector2d(-0.5, 0.0), Sense::GreaterEqual, 0.0);
  lp.add(Eigen::Vector2d(1.0, 1.0), Sense::Equal, 1.0);
  const LpResult r = solve_lp(lp, Goal::Maximize);
  REQUIRE(r.optimal());
  CHECK(r.point[0] == doctest::Approx(0.0));
  CHECK(r.point[1] == doctest::Approx(1.0));
}

TEST_CASE("empty feasible set is infeasible") {
  LinearProgram lp = box_lp(1, -2.0, 2.0);
  lp.objective << 1.0;
  lp.add(Eigen::VectorXd::Ones(1), Sense::GreaterEqual, 3.0);
  CHECK(solve_lp(lp, Goal::Maximize).status == LpStatus::Infeasible);
}

TEST_CASE("free variable with no upper limit is unbounded") {
  LinearProgram lp(2);
  lp.objective << 1.0, 1.0;
  lp.add(Eigen::Vector2d(1.0, -1.0), Sense::LessEqual, 1.0);
  CHECK(solve_lp(lp, Goal::Maximize).status == LpStatus::Unbounded);
}

TEST_CASE("dimension mismatch is an input error") {
  LinearProgram lp(2);
  lp.constraints.push_back({Eigen::VectorXd::Ones(3), 0.0, Sense::LessEqual});
  CHECK_THROWS_AS(solve_lp(lp, Goal::Maximize), InputError);
}

TEST_CASE("random LPs: optimal points are feasible and agree with the objective") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 6);
    LinearProgram lp = box_lp(n, -1.0, 1.0);
    lp.objective = gaussian_vector(rng, n);
    const int m = static_cast<int>(rng() % 8);
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd a = gaussian_vector(rng, n);
      const double b = 0.5 * uniform01(rng) - 0.1;
      const int s = static_cast<int>(rng() % 3);
      lp.add(a, s == 0 ? Sense::LessEqual : (s == 1 ? Sense::GreaterEqual : Sense::Equal),
             s == 2 ? 0.0 : b);
    }
    for (Goal goal : {Goal::Maximize, Goal::Minimize}) {
      const LpResult r = solve_lp(lp, goal);
      if (!r.optimal()) continue;
      CHECK(max_violation(lp, r.point) <= 1e-9);
      CHECK(std::abs(lp.objective.dot(r.point) - r.value) <= 1e-9);
    }
  }
}

TEST_CASE("the same input gives the same vertex") {
  LinearProgram lp = box_lp(4, 0.0, 1.0);
  lp.objective << 1.0, 1.0, 1.0, 1.0;
  lp.add(Eigen::Vector4d(1.0, 1.0, 1.0, 1.0), Sense::LessEqual, 2.0);
  const LpResult a = solve_lp(lp, Goal::Maximize);
  const LpResult b = solve_lp(lp, Goal::Maximize);
  REQUIRE(a.optimal());
  CHECK(a.value == doctest::Approx(2.0));
  CHECK(a.point == b.point);
}
