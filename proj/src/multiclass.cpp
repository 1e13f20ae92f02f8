#include "nnpart/multiclass.hpp"

#include <algorithm>
#include <limits>

#include "nnpart/errors.hpp"
#include "nnpart/lp.hpp"

namespace nnpart {

Eigen::VectorXd choose_distribution(const Eigen::MatrixXd& M, const LpOptions& options) {
  const Eigen::Index n = M.rows();
  if (n == 0 || M.cols() != n) throw InputError("distribution matrix must be square and nonempty");
  if (!M.allFinite()) throw InputError("distribution matrix must be finite");
  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
  if ((M + M.transpose()).minCoeff() < -1e-9 * std::max(scale, 1.0))
    throw InputError("distribution matrix needs M + Mᵀ >= 0");

  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if ((M * uniform).minCoeff() >= 0.0) return uniform;

  // Game form: maximize m subject to S·v >= m, v in the simplex. Always
  // feasible, so round-off cannot turn it into a spurious infeasibility.
  const Eigen::MatrixXd S = M / scale;
  LinearProgram lp(n + 1);
  lp.lower.setZero();
  lp.upper.setOnes();
  lp.lower[n] = -2.0;
  lp.upper[n] = 2.0;
  lp.objective[n] = 1.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    Eigen::VectorXd row(n + 1);
    row << S.row(r).transpose(), -1.0;
    lp.add(row, Sense::GreaterEqual, 0.0);
  }
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n + 1);
  ones[n] = 0.0;
  lp.add(ones, Sense::Equal, 1.0);
  const LpResult res = solve_lp(lp, Goal::Maximize, options);
  if (!res.optimal()) throw InvariantViolation("distribution LP failed");

  Eigen::VectorXd v = res.point.head(n).cwiseMax(0.0);
  v /= v.sum();
  if ((M * v).minCoeff() < -1e-9) throw InvariantViolation("no distribution with Mv >= 0 although M + Mᵀ >= 0");
  return v;
}

MulticlassLearner::MulticlassLearner(int k, const SubLearnerFactory& factory, std::uint64_t seed)
    : k_(k), rng_(seed) {
  if (k < 2) throw ConfigError("multiclass learner needs k >= 2");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) subs_.push_back(factory(i, j));
}

MulticlassLearner::MulticlassLearner(const MulticlassLearner& other)
    : k_(other.k_), rng_(other.rng_), matrices_(other.matrices_), v_(other.v_), lp_options_(other.lp_options_) {
  for (const auto& s : other.subs_) subs_.push_back(s->clone());
}

std::size_t MulticlassLearner::pair_index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= k_ || j >= k_) throw InputError("invalid label pair");
  if (i > j) std::swap(i, j);
  // Row-major index into the strict upper triangle.
  return static_cast<std::size_t>(i * (2 * k_ - i - 1) / 2 + (j - i - 1));
}

TwoCenterLearner& MulticlassLearner::sub(int i, int j) { return *subs_[pair_index(i, j)]; }
const TwoCenterLearner& MulticlassLearner::sub(int i, int j) const { return *subs_[pair_index(i, j)]; }

RoundMatrices MulticlassLearner::build_matrices(const Eigen::VectorXd& q) {
  RoundMatrices r;
  r.L = Eigen::MatrixXd::Zero(k_, k_);
  r.D = Eigen::MatrixXd::Zero(k_, k_);
  for (int i = 0; i < k_; ++i) {
    for (int j = i + 1; j < k_; ++j) {
      TwoCenterLearner& s = sub(i, j);
      const double l = s.loss_bound(q);
      r.L(i, j) = r.L(j, i) = l;
      // Exactly one side is a mistake for this sub-learner.
      if (s.predict(q) == Side::First) r.D(j, i) = l;
      else r.D(i, j) = l;
    }
  }
  r.M = r.D - 0.5 * r.L;
  return r;
}

int MulticlassLearner::predict(const Eigen::VectorXd& q) {
  matrices_ = build_matrices(q);
  v_ = choose_distribution(matrices_.M, lp_options_);
  const double u = uniform01(rng_);
  double acc = 0.0;
  int label = -1;
  for (int i = 0; i < k_; ++i) {
    acc += v_[i];
    if (u < acc) {
      label = i;
      break;
    }
  }
  if (label < 0) {
    // Round-off left u past the total mass: take the last label with mass.
    for (int i = k_ - 1; i >= 0 && label < 0; --i)
      if (v_[i] > 0.0) label = i;
  }
  return label;
}

void MulticlassLearner::observe(const Eigen::VectorXd& q, int guessed, int truth) {
  if (guessed == truth) return;
  TwoCenterLearner& s = sub(guessed, truth);
  const int first = std::min(guessed, truth);
  s.observe(q, s.predict(q), truth == first ? Side::First : Side::Second);
}

std::size_t MulticlassLearner::total_updates() const {
  std::size_t n = 0;
  for (const auto& s : subs_) n += s->update_count();
  return n;
}

}  // namespace nnpart
