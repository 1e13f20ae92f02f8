#include "nnpart/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"
#include "nnpart/kernels.hpp"

namespace nnpart {

QueryMap make_query_map(Metric metric, double p, Eigen::Index d) {
  QueryMap m;
  switch (metric) {
    case Metric::InnerProduct:
      m.lift = [](const Eigen::VectorXd& q) { return q; };
      m.to_original = [](double L) { return L; };
      m.learner_dim = d;
      break;
    case Metric::L2:
      m.lift = [](const Eigen::VectorXd& q) { return l2_lift_query(q); };
      m.to_original = [](double L) { return l2_bound_to_original(L); };
      m.alpha = 0.5;
      m.learner_dim = d + 1;
      break;
    case Metric::Lp: {
      const double r = std::round(p);
      if (std::abs(p - r) < 1e-12 && static_cast<long>(r) % 2 == 0) {
        const auto kernel = std::make_shared<EvenPKernel>(static_cast<int>(r), d);
        m.lift = [kernel](const Eigen::VectorXd& q) { return kernel->learner_query(q); };
        m.to_original = [kernel](double L) { return kernel->bound_to_original(L); };
        m.alpha = 1.0 / r;
        m.learner_dim = kernel->lifted_dimension();
      } else {
        m.lift = [](const Eigen::VectorXd& q) { return q; };
        m.to_original = [](double L) { return L; };
        m.learner_dim = d;
      }
      break;
    }
  }
  return m;
}

ReductionPlayer::ReductionPlayer(int k, QueryMap map, const SubLearnerFactory& factory, std::uint64_t seed)
    : map_(std::move(map)), learner_(k, factory, seed) {}

const Eigen::VectorXd& ReductionPlayer::lifted(const Eigen::VectorXd& q) {
  if (last_q_.size() != q.size() || last_q_ != q) {
    last_q_ = q;
    last_lift_ = map_.lift(q);
  }
  return last_lift_;
}

int ReductionPlayer::guess(const Eigen::VectorXd& q) { return learner_.predict(lifted(q)); }

void ReductionPlayer::learn(const Eigen::VectorXd& q, int guess, int truth) {
  learner_.observe(lifted(q), guess, truth);
}

double ReductionPlayer::bound(const Eigen::VectorXd& q, int guess, int truth) {
  if (guess == truth) {
    scale_ = 0;
    return 0.0;
  }
  TwoCenterLearner& s = learner_.sub(guess, truth);
  const double L = s.loss_bound(lifted(q));
  scale_ = s.last_scale();
  return map_.to_original(L);
}

double ReductionPlayer::uncertainty(const Eigen::VectorXd& q) {
  const Eigen::VectorXd x = map_.lift(q);
  double best = 0.0;
  for (int i = 0; i < learner_.labels(); ++i)
    for (int j = i + 1; j < learner_.labels(); ++j) best = std::max(best, learner_.pair_bound(x, i, j));
  return best;
}

double RandomPlayer::bound(const Eigen::VectorXd&, int, int) { return std::numeric_limits<double>::infinity(); }

Eigen::VectorXd ListSource::next(long round, Player&) {
  if (round < 1 || static_cast<std::size_t>(round) > queries_.size())
    throw GenerationError("query list exhausted");
  return queries_[static_cast<std::size_t>(round - 1)];
}

AdaptiveSource::AdaptiveSource(Eigen::Index d, std::uint64_t seed, int candidates)
    : d_(d), rng_(seed), candidates_(candidates) {
  if (candidates < 1) throw ConfigError("adaptive adversary needs at least one candidate");
}

Eigen::VectorXd AdaptiveSource::next(long, Player& player) {
  Eigen::VectorXd best;
  double score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < candidates_; ++c) {
    Eigen::VectorXd q = random_in_ball(rng_, d_);
    const double s = player.uncertainty(q);
    if (s > score) {
      score = s;
      best = std::move(q);
    }
  }
  return best;
}

LossLedger run_episode(Player& player, const Environment& env, QuerySource& source, long T, double robust_gamma,
                       const RoundHook& hook) {
  LossLedger ledger(robust_gamma);
  for (long t = 1; t <= T; ++t) {
    const Eigen::VectorXd q = source.next(t, player);
    const int g = player.guess(q);
    const int r = env.truth(q);
    const double loss = env.exact_loss(q, g);
    const double b = player.bound(q, g, r);
    if (loss > 0.0 && loss > b + 1e-9 * (1.0 + b))
      throw InvariantViolation("round " + std::to_string(t) + ": loss " + format_number(loss) +
                               " exceeds its bound " + format_number(b));
    ledger.add(t, g, r, loss, b, player.scale_index(), env.margin(q));
    player.learn(q, g, r);
    if (hook) hook(RoundInfo{t, &q, g, r, loss, b});
  }
  return ledger;
}

LowerBoundReport run_lowerbound_episode(Player& player, Eigen::Index d, long steps, std::uint64_t seed) {
  if (steps < 0) throw ConfigError("lower-bound steps must be nonnegative");
  LowerBoundAdversary adv(d, steps + 2, seed);
  LowerBoundReport rep;
  rep.epsilon = adv.epsilon();
  rep.loss_floor = adv.loss_floor();
  rep.min_mistake_loss = std::numeric_limits<double>::infinity();
  rep.min_separation_margin = std::numeric_limits<double>::infinity();
  adv.step();
  adv.step();
  for (long t = 1; t <= steps; ++t) {
    const auto s = adv.step();
    rep.min_separation_margin = std::min(rep.min_separation_margin, s.separation_margin);
    const int g = player.guess(s.point);
    const double loss = g == s.label ? 0.0 : adv.region_distance(s.point, g);
    if (g != s.label) rep.min_mistake_loss = std::min(rep.min_mistake_loss, loss);
    rep.ledger.add(t, g, s.label, loss, player.bound(s.point, g, s.label), 0, 0.0);
    player.learn(s.point, g, s.label);
  }
  rep.min_pairwise_distance = adv.min_pairwise_distance();
  rep.points = adv.emitted();
  return rep;
}

}  // namespace nnpart
