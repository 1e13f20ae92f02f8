#include "nnpart/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"

namespace nnpart {

PairwiseLearner::PairwiseLearner(ScaleSchedule schedule, QuantileOptions quantile, std::uint64_t seed)
    : cs_(schedule, quantile, seed) {}

PairwiseLearner::Proposal& PairwiseLearner::prepare(const Eigen::VectorXd& q) {
  if (q.size() != cs_.knowledge().dimension()) throw InputError("query dimension mismatch");
  if (cache_ && cache_->query == q) return *cache_;
  Proposal p;
  p.query = q;
  p.norm = q.norm();
  if (p.norm > 0.0) {
    p.unit = q / p.norm;
    p.support = cs_.knowledge().support_interval(p.unit);
    p.index = select_index(cs_.schedule(), p.support.width());
  }
  cache_ = std::move(p);
  return *cache_;
}

Side PairwiseLearner::predict(const Eigen::VectorXd& q) {
  Proposal& p = prepare(q);
  if (p.guessed) return p.side;
  if (p.norm == 0.0) {
    p.guess = 0.0;
  } else if (p.support.lo >= 0.0 || p.support.hi < 0.0) {
    // The whole interval sits on one side; the median cannot change the sign.
    p.guess = std::clamp(0.0, p.support.lo, p.support.hi);
  } else {
    const CSearchGuess g = cs_.guess(p.unit, ++nonce_);
    p.guess = g.guess;
  }
  p.side = p.guess >= 0.0 ? Side::First : Side::Second;
  p.guessed = true;
  return p.side;
}

void PairwiseLearner::observe(const Eigen::VectorXd& q, Side predicted, Side truth) {
  const Side mine = predict(q);
  if (predicted != mine) throw InputError("observe: prediction does not match this learner's proposal");
  if (predicted == truth) return;
  const Proposal p = *cache_;
  if (p.norm == 0.0) throw InconsistentFeedback("zero query cannot be a mistake under honest feedback");
  cs_.feedback(p.unit, p.guess, truth == Side::First ? Feedback::Low : Feedback::High);
  cache_.reset();
}

double PairwiseLearner::loss_bound(const Eigen::VectorXd& q) {
  const Proposal& p = prepare(q);
  if (p.norm == 0.0) return 0.0;
  return std::pow(p.norm * p.support.width(), alpha());
}

std::unique_ptr<TwoCenterLearner> PairwiseLearner::clone() const {
  return std::make_unique<PairwiseLearner>(*this);
}

double PairwiseLearner::last_guess() const {
  return cache_ && cache_->guessed ? cache_->guess : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace nnpart
