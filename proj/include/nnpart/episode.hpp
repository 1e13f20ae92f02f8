#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/environment.hpp"
#include "nnpart/ledger.hpp"
#include "nnpart/lowerbound.hpp"
#include "nnpart/multiclass.hpp"
#include "nnpart/rng.hpp"

namespace nnpart {

/// Anything that labels queries online.
class Player {
 public:
  virtual ~Player() = default;
  virtual int guess(const Eigen::VectorXd& q) = 0;
  virtual void learn(const Eigen::VectorXd& q, int guess, int truth) = 0;
  /// Bound on the loss of `guess` when `truth` is right, in the
  /// environment's units; +inf when the player has none.
  virtual double bound(const Eigen::VectorXd& q, int guess, int truth) = 0;
  /// Larger means the player is less certain about q (adaptive adversary).
  virtual double uncertainty(const Eigen::VectorXd&) { return 0.0; }
  /// Scale index behind the last bound() call.
  virtual int scale_index() const { return 0; }
};

/// How original queries enter the inner-product learners and how their loss
/// bounds map back.
struct QueryMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> lift;
  std::function<double(double)> to_original;
  double alpha = 1.0;
  Eigen::Index learner_dim = 0;
};

/// Identity for inner products, Euclidean lift for l2 (α = 1/2), exact
/// polynomial lift for even p (α = 1/p). Other p go through the multiscale
/// learner and use the identity.
QueryMap make_query_map(Metric metric, double p, Eigen::Index d);

class ReductionPlayer final : public Player {
 public:
  ReductionPlayer(int k, QueryMap map, const SubLearnerFactory& factory, std::uint64_t seed);

  int guess(const Eigen::VectorXd& q) override;
  void learn(const Eigen::VectorXd& q, int guess, int truth) override;
  double bound(const Eigen::VectorXd& q, int guess, int truth) override;
  double uncertainty(const Eigen::VectorXd& q) override;
  int scale_index() const override { return scale_; }

  MulticlassLearner& learner() { return learner_; }
  const QueryMap& map() const { return map_; }

 private:
  const Eigen::VectorXd& lifted(const Eigen::VectorXd& q);

  QueryMap map_;
  MulticlassLearner learner_;
  Eigen::VectorXd last_q_;
  Eigen::VectorXd last_lift_;
  int scale_ = 0;
};

/// Uniform random labels; the baseline for the lower-bound episodes.
class RandomPlayer final : public Player {
 public:
  RandomPlayer(int k, std::uint64_t seed) : k_(k), rng_(seed) {}
  int guess(const Eigen::VectorXd&) override { return static_cast<int>(rng_() % static_cast<std::uint64_t>(k_)); }
  void learn(const Eigen::VectorXd&, int, int) override {}
  double bound(const Eigen::VectorXd&, int, int) override;

 private:
  int k_;
  Rng rng_;
};

class QuerySource {
 public:
  virtual ~QuerySource() = default;
  virtual Eigen::VectorXd next(long round, Player& player) = 0;
};

class UniformBallSource final : public QuerySource {
 public:
  UniformBallSource(Eigen::Index d, std::uint64_t seed) : d_(d), rng_(seed) {}
  Eigen::VectorXd next(long, Player&) override { return random_in_ball(rng_, d_); }

 private:
  Eigen::Index d_;
  Rng rng_;
};

/// Replays a fixed list (margin streams, replay files).
class ListSource final : public QuerySource {
 public:
  explicit ListSource(std::vector<Eigen::VectorXd> queries) : queries_(std::move(queries)) {}
  Eigen::VectorXd next(long round, Player&) override;
  std::size_t size() const { return queries_.size(); }

 private:
  std::vector<Eigen::VectorXd> queries_;
};

/// Emits the candidate, out of `candidates` uniform-ball draws, on which the
/// player is least certain (first one on ties).
class AdaptiveSource final : public QuerySource {
 public:
  AdaptiveSource(Eigen::Index d, std::uint64_t seed, int candidates = 64);
  Eigen::VectorXd next(long round, Player& player) override;

 private:
  Eigen::Index d_;
  Rng rng_;
  int candidates_;
};

struct RoundInfo {
  long round = 0;
  const Eigen::VectorXd* query = nullptr;
  int guess = 0;
  int truth = 0;
  double loss = 0.0;
  double bound = 0.0;
};
using RoundHook = std::function<void(const RoundInfo&)>;

/// T rounds of query, guess, reveal, learn. The hook runs after learn.
/// Throws InvariantViolation if a mistake exceeds the player's loss bound.
LossLedger run_episode(Player& player, const Environment& env, QuerySource& source, long T,
                       double robust_gamma = 0.0, const RoundHook& hook = {});

struct LowerBoundReport {
  LossLedger ledger;
  double epsilon = 0.0;
  double loss_floor = 0.0;
  double min_pairwise_distance = 0.0;
  double min_mistake_loss = 0.0;   // +inf without mistakes
  double min_separation_margin = 0.0;
  std::vector<Eigen::VectorXd> points;  // seeds included, in emission order
};

/// `steps` packed points after the two seed points (T = steps + 2 sets ε).
/// A mistake costs the distance from the point to the hull of the earlier
/// points carrying the guessed label.
LowerBoundReport run_lowerbound_episode(Player& player, Eigen::Index d, long steps, std::uint64_t seed);

}  // namespace nnpart
