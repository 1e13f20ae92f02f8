#include <doctest.h>

#include <cmath>

#include "nnpart/errors.hpp"
#include "nnpart/sampling.hpp"

using namespace nnpart;

TEST_CASE("hit-and-run stays inside and is reproducible") {
  const ConvexBody unit = ConvexBody::cube(1, 0.0, 1.0);
  const auto a = hit_and_run(unit, 100, 10, 7);
  const auto b = hit_and_run(unit, 100, 10, 7);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i][0] >= 0.0);
    CHECK(a[i][0] <= 1.0);
    CHECK(a[i] == b[i]);
  }

  ConvexBody half = ConvexBody::cube(2, -1.0, 1.0);
  half.add_halfspace(Eigen::Vector2d(1.0, 0.0), 0.0);
  for (const auto& x : hit_and_run(half, 1000, 10, 3)) CHECK(x[0] <= 1e-9);
}

TEST_CASE("hit-and-run mean is centred on a symmetric square") {
  const ConvexBody square = ConvexBody::cube(2, -1.0, 1.0);
  double sum = 0.0;
  const auto pts = hit_and_run(square, 100000, 100, 21);
  for (const auto& x : pts) sum += x[0];
  CHECK(std::abs(sum / 1e5) < 0.02);
}

TEST_CASE("hit-and-run crosses a thin diagonal strip from a corner") {
  ConvexBody strip = ConvexBody::cube(2, -2.0, 2.0);
  strip.add_halfspace(Eigen::Vector2d(1.0, -1.0), 0.02);
  strip.add_halfspace(Eigen::Vector2d(-1.0, 1.0), 0.02);
  double sum = 0.0;
  std::size_t n = 0;
  hit_and_run_walk(strip, Eigen::Vector2d(1.99, 1.99), 2048, 128, 5, [&](const Eigen::VectorXd& x) {
    sum += 0.5 * (x[0] + x[1]);
    ++n;
  });
  CHECK(std::abs(sum / static_cast<double>(n)) < 0.25);
}

TEST_CASE("empty bodies are rejected") {
  ConvexBody body = ConvexBody::cube(1, 0.0, 2.0);
  body.add_halfspace(Eigen::VectorXd::Ones(1), -1.0);
  CHECK_THROWS_AS(hit_and_run(body, 10, 10, 1), EmptyBodyError);
}

TEST_CASE("directional quantiles") {
  const QuantileOptions big{100000, 100};
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  CHECK(std::abs(directional_quantile(ConvexBody::cube(3, -2.0, 2.0), e1, 0.5, 1, big)) < 0.05);

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  const ConvexBody unit = ConvexBody::cube(1, 0.0, 1.0);
  CHECK(std::abs(directional_quantile(unit, one, 0.25, 2, big) - 0.25) < 0.02);
  CHECK(std::abs(directional_quantile(unit.expanded(0.5), one, 0.5, 3, big) - 0.5) < 0.03);
}

TEST_CASE("quantiles are monotone in q under a fixed seed") {
  ConvexBody body = ConvexBody::cube(2, -1.0, 1.0);
  body.add_halfspace(Eigen::Vector2d(1.0, 1.0), 0.3);
  const Eigen::Vector2d dir(0.6, 0.8);
  double prev = -1e9;
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double g = directional_quantile(body, dir, q, 17);
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("volume estimates") {
  const ConvexBody square = ConvexBody::cube(2, -1.0, 1.0);
  const Estimate lv = estimate_log_volume(square, 1000, 4);
  CHECK(lv.value == doctest::Approx(std::log(4.0)));

  ConvexBody half = square;
  half.add_halfspace(Eigen::Vector2d(1.0, 0.0), 0.0);
  const Estimate r = estimate_volume_ratio(square, half, 50000, 5);
  CHECK(std::abs(r.value - 0.5) < 3.0 * r.std_error + 1e-3);

  CHECK(log_ball_volume(2, 1.0) == doctest::Approx(std::log(M_PI)));
  CHECK(log_ball_volume(3, 2.0) == doctest::Approx(std::log(4.0 / 3.0 * M_PI * 8.0)));
}
