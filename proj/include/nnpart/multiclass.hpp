#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/lp.hpp"
#include "nnpart/pairwise.hpp"
#include "nnpart/rng.hpp"

namespace nnpart {

/// L: pairwise loss bounds (symmetric). D(i, j): guaranteed potential drop of
/// the (i, j) sub-learner when i is the true label. M = D - L/2.
struct RoundMatrices {
  Eigen::MatrixXd L;
  Eigen::MatrixXd D;
  Eigen::MatrixXd M;
};

/// v in the simplex with Mv >= 0. Uniform when it qualifies, otherwise the
/// simplex vertex returned by the feasibility LP. Requires M + Mᵀ >= 0.
Eigen::VectorXd choose_distribution(const Eigen::MatrixXd& M, const LpOptions& options = {});

using SubLearnerFactory = std::function<std::unique_ptr<TwoCenterLearner>(int i, int j)>;

/// One two-center learner per unordered label pair; labels are 0-based and
/// sub (i, j), i < j, treats i as "first".
class MulticlassLearner {
 public:
  MulticlassLearner(int k, const SubLearnerFactory& factory, std::uint64_t seed);
  MulticlassLearner(const MulticlassLearner& other);
  MulticlassLearner& operator=(const MulticlassLearner&) = delete;

  int labels() const { return k_; }
  void set_lp_options(const LpOptions& options) { lp_options_ = options; }

  RoundMatrices build_matrices(const Eigen::VectorXd& q);
  int predict(const Eigen::VectorXd& q);
  /// Forwards (guessed, truth) to that pair's sub-learner with the sub's own
  /// prediction; nothing changes when guessed == truth.
  void observe(const Eigen::VectorXd& q, int guessed, int truth);

  TwoCenterLearner& sub(int i, int j);
  const TwoCenterLearner& sub(int i, int j) const;

  /// Pairwise loss bound in the learner's units.
  double pair_bound(const Eigen::VectorXd& q, int i, int j) { return sub(i, j).loss_bound(q); }

  const RoundMatrices& last_matrices() const { return matrices_; }
  const Eigen::VectorXd& last_distribution() const { return v_; }
  std::size_t total_updates() const;

 private:
  std::size_t pair_index(int i, int j) const;

  int k_;
  std::vector<std::unique_ptr<TwoCenterLearner>> subs_;
  Rng rng_;
  RoundMatrices matrices_;
  Eigen::VectorXd v_;
  LpOptions lp_options_;
};

}  // namespace nnpart
