#include <doctest.h>

#include <cmath>

#include "nnpart/csearch.hpp"
#include "nnpart/errors.hpp"
#include "nnpart/rng.hpp"

using namespace nnpart;

namespace {

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST_CASE("fresh guess is near zero and reproducible") {
  ContextualSearch cs(ScaleSchedule{3, 1.0, -2, 16}, {8000, 256}, 11);
  const Eigen::VectorXd x = Eigen::VectorXd::Unit(3, 1);
  const CSearchGuess a = cs.guess(x);
  CHECK(std::abs(a.guess) < 0.1);
  CHECK(a.index == -2);
  const CSearchGuess b = cs.guess(x);
  CHECK(a.guess == b.guess);
  CHECK(a.index == b.index);
  CHECK_THROWS_AS(cs.guess(Eigen::VectorXd::Constant(3, 1.0)), InputError);
}

TEST_CASE("index follows the width") {
  ContextualSearch cs(ScaleSchedule{1, 1.0, -2, 16}, {2000, 128}, 1);
  cs.feedback(scalar(1.0), 0.0, Feedback::Low);
  cs.feedback(scalar(1.0), 0.3, Feedback::High);
  const CSearchGuess g = cs.guess(scalar(1.0));
  CHECK(g.support.width() == doctest::Approx(0.3));
  CHECK(g.index == 1);
  CHECK(g.guess >= 0.0);
  CHECK(g.guess <= 0.3);
}

TEST_CASE("feedback signs") {
  ContextualSearch low(ScaleSchedule{1, 1.0, -2, 16}, {}, 1);
  low.feedback(scalar(1.0), 0.0, Feedback::Low);
  Interval iv = low.knowledge().support_interval(scalar(1.0));
  CHECK(iv.lo == doctest::Approx(0.0));
  CHECK(iv.hi == doctest::Approx(2.0));
  CHECK(low.knowledge().cut_count() == 1);

  ContextualSearch high(ScaleSchedule{1, 1.0, -2, 16}, {}, 1);
  high.feedback(scalar(1.0), 0.7, Feedback::High);
  iv = high.knowledge().support_interval(scalar(1.0));
  CHECK(iv.lo == doctest::Approx(-2.0));
  CHECK(iv.hi == doctest::Approx(0.7));
  CHECK(high.knowledge().contains(scalar(0.5)));
}

TEST_CASE("truthful feedback keeps the hidden vector and bounds the loss") {
  const Eigen::Index d = 3;
  ContextualSearch cs(ScaleSchedule::for_horizon(d, 1.0, 200), {1024, 64}, 5);
  Rng rng(9);
  const Eigen::VectorXd hidden = random_in_ball(rng, d);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd x = random_unit_vector(rng, d);
    const CSearchGuess g = cs.guess(x);
    const double value = x.dot(hidden);
    CHECK(std::abs(g.guess - value) <= g.support.width() + 1e-9);
    cs.feedback(x, g.guess, value >= g.guess ? Feedback::Low : Feedback::High);
    CHECK(cs.knowledge().contains(hidden));
  }
  CHECK(cs.rounds() == 200);
}
