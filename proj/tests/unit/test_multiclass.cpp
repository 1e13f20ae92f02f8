#include <doctest.h>

#include <cmath>

#include "nnpart/errors.hpp"
#include "nnpart/multiclass.hpp"
#include "nnpart/pairwise.hpp"
#include "nnpart/rng.hpp"

using namespace nnpart;

namespace {

SubLearnerFactory pairwise_factory(Eigen::Index d, std::uint64_t seed) {
  return [d, seed](int i, int j) {
    return std::make_unique<PairwiseLearner>(ScaleSchedule{d, 1.0, -2, 16}, QuantileOptions{1024, 64},
                                             derive_seed(seed, 3, i, j));
  };
}

/// Always predicts one side with a fixed loss bound.
class FixedLearner final : public TwoCenterLearner {
 public:
  FixedLearner(Side s, double L) : side_(s), L_(L) {}
  Side predict(const Eigen::VectorXd&) override { return side_; }
  void observe(const Eigen::VectorXd&, Side, Side) override { ++updates_; }
  double loss_bound(const Eigen::VectorXd&) override { return L_; }
  std::unique_ptr<TwoCenterLearner> clone() const override { return std::make_unique<FixedLearner>(*this); }
  std::size_t update_count() const override { return updates_; }
  int last_scale() const override { return 0; }

 private:
  Side side_;
  double L_;
  std::size_t updates_ = 0;
};

}  // namespace

TEST_CASE("choose_distribution") {
  const Eigen::VectorXd u = choose_distribution(Eigen::MatrixXd::Zero(3, 3));
  CHECK(u.isApprox(Eigen::VectorXd::Constant(3, 1.0 / 3.0)));

  Eigen::MatrixXd M(2, 2);
  M << 0.0, 1.0, -0.5, 0.0;
  const Eigen::VectorXd v = choose_distribution(M);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));

  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, -1.0, -1.0, 0.0;
  CHECK_THROWS_AS(choose_distribution(bad), InputError);
  CHECK_THROWS_AS(choose_distribution(Eigen::MatrixXd::Zero(2, 3)), InputError);

  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Eigen::MatrixXd A(5, 5);
    for (int i = 0; i < 25; ++i) A(i / 5, i % 5) = 2.0 * uniform01(rng) - 1.0;
    Eigen::MatrixXd R = A - A.transpose();
    for (int i = 0; i < 5; ++i) R(i, i) += uniform01(rng);
    const Eigen::VectorXd w = choose_distribution(R);
    CHECK((R * w).minCoeff() >= -1e-9);
    CHECK(w.sum() == doctest::Approx(1.0));
    CHECK(w.minCoeff() >= 0.0);
  }
}

TEST_CASE("round matrices") {
  MulticlassLearner k2(2, pairwise_factory(3, 1), 2);
  const Eigen::VectorXd q = Eigen::VectorXd::Unit(3, 0);
  const RoundMatrices r = k2.build_matrices(q);
  CHECK(r.L(0, 1) == doctest::Approx(4.0));
  CHECK(r.L(1, 0) == doctest::Approx(4.0));
  CHECK(r.L(0, 0) == 0.0);
  CHECK(((r.D(0, 1) == r.L(0, 1) && r.D(1, 0) == 0.0) || (r.D(1, 0) == r.L(0, 1) && r.D(0, 1) == 0.0)));
  CHECK(r.M.isApprox(r.D - 0.5 * r.L));

  MulticlassLearner k3(3, pairwise_factory(3, 1), 2);
  const RoundMatrices r3 = k3.build_matrices(q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(r3.L(i, j) == doctest::Approx(4.0));
  CHECK((r3.M + r3.M.transpose()).minCoeff() >= -1e-12);
}

TEST_CASE("degenerate distribution always picks the second label") {
  // Sub (0, 1) predicts second: D(1, 0) = L, so M = [[-L/2, -L/2], [L/2, L/2]] minus diagonal.
  MulticlassLearner m(2, [](int, int) { return std::make_unique<FixedLearner>(Side::Second, 1.0); }, 3);
  const Eigen::VectorXd q = Eigen::VectorXd::Unit(2, 0);
  for (int t = 0; t < 100; ++t) CHECK(m.predict(q) == 1);
  CHECK(m.last_distribution()[1] == doctest::Approx(1.0));
}

TEST_CASE("uniform distribution draws") {
  MulticlassLearner m(4, [](int, int) { return std::make_unique<FixedLearner>(Side::First, 0.0); }, 9);
  const Eigen::VectorXd q = Eigen::VectorXd::Unit(2, 0);
  std::vector<int> counts(4, 0);
  const int n = 10000;
  for (int t = 0; t < n; ++t) ++counts[static_cast<std::size_t>(m.predict(q))];
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - n / 4.0) <= 3.0 * sigma);

  MulticlassLearner a(4, [](int, int) { return std::make_unique<FixedLearner>(Side::First, 0.0); }, 9);
  MulticlassLearner b(4, [](int, int) { return std::make_unique<FixedLearner>(Side::First, 0.0); }, 9);
  for (int t = 0; t < 50; ++t) CHECK(a.predict(q) == b.predict(q));
}

TEST_CASE("observe touches only the guessed pair") {
  MulticlassLearner m(4, pairwise_factory(3, 2), 4);
  Rng rng(8);
  const Eigen::VectorXd q = random_in_ball(rng, 3);
  const int g = m.predict(q);
  m.observe(q, g, g);
  CHECK(m.total_updates() == 0);

  // Force a mistake on the pair (0, 2) from whichever side the sub predicts.
  const Eigen::VectorXd q2 = Eigen::VectorXd::Unit(3, 2);
  m.predict(q2);
  const Side s = m.sub(0, 2).predict(q2);
  const int guessed = s == Side::First ? 0 : 2;
  m.observe(q2, guessed, 2 - guessed);
  CHECK(m.sub(0, 2).update_count() == 1);
  CHECK(m.total_updates() == 1);
}

TEST_CASE("cut counts equal sub-learner mistakes and the expected-loss bound holds") {
  const Eigen::Index d = 3;
  const int k = 4;
  Rng rng(12);
  std::vector<Eigen::VectorXd> centers;
  for (int i = 0; i < k; ++i) centers.push_back(random_in_ball(rng, d));
  MulticlassLearner m(k, pairwise_factory(d, 6), 7);
  long mistakes = 0;
  for (int t = 0; t < 300; ++t) {
    const Eigen::VectorXd q = random_in_ball(rng, d);
    int truth = 0;
    for (int i = 1; i < k; ++i)
      if (q.dot(centers[static_cast<std::size_t>(i)]) > q.dot(centers[static_cast<std::size_t>(truth)])) truth = i;
    const int g = m.predict(q);
    const RoundMatrices& r = m.last_matrices();
    const Eigen::VectorXd& v = m.last_distribution();
    CHECK(r.L.row(truth).dot(v) <= 2.0 * r.D.row(truth).dot(v) + 1e-9);
    if (g != truth) {
      // The pair's sub-learner updates only when its own proposal is wrong.
      const Side truth_side = truth < g ? Side::First : Side::Second;
      if (m.sub(g, truth).predict(q) != truth_side) ++mistakes;
    }
    m.observe(q, g, truth);
    CHECK(static_cast<long>(m.total_updates()) == mistakes);
  }
}
