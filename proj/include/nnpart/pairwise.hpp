#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "nnpart/csearch.hpp"

namespace nnpart {

enum class Side { First, Second };

inline Side other(Side s) { return s == Side::First ? Side::Second : Side::First; }

/// Two-center learner with a potential: loss_bound(q) bounds the loss of any
/// mistake on q, drop_bound(q, h) is the potential drop guaranteed when the
/// true side is h. Multiclass reduction works through this interface.
class TwoCenterLearner {
 public:
  virtual ~TwoCenterLearner() = default;

  virtual Side predict(const Eigen::VectorXd& q) = 0;
  virtual void observe(const Eigen::VectorXd& q, Side predicted, Side truth) = 0;
  virtual double loss_bound(const Eigen::VectorXd& q) = 0;
  virtual double drop_bound(const Eigen::VectorXd& q, Side hypothetical) {
    return predict(q) == hypothetical ? 0.0 : loss_bound(q);
  }
  virtual std::unique_ptr<TwoCenterLearner> clone() const = 0;

  /// Number of state updates applied so far.
  virtual std::size_t update_count() const = 0;
  /// Scale index behind the most recent prediction.
  virtual int last_scale() const = 0;
};

/// Sign learner for w = x1 - x2 under inner-product similarity: first is
/// nearer iff ⟨q, w⟩ >= 0. Updates only on its own mistakes.
class PairwiseLearner final : public TwoCenterLearner {
 public:
  PairwiseLearner(ScaleSchedule schedule, QuantileOptions quantile, std::uint64_t seed);

  Side predict(const Eigen::VectorXd& q) override;
  void observe(const Eigen::VectorXd& q, Side predicted, Side truth) override;
  /// (‖q‖ · width(K, q/‖q‖))^α; zero for q = 0.
  double loss_bound(const Eigen::VectorXd& q) override;
  std::unique_ptr<TwoCenterLearner> clone() const override;
  std::size_t update_count() const override { return cs_.knowledge().cut_count(); }
  int last_scale() const override { return cache_ ? cache_->index : 0; }

  const ContextualSearch& search() const { return cs_; }
  double alpha() const { return cs_.schedule().alpha; }
  /// The cached guess g behind the last prediction on q (NaN if none).
  double last_guess() const;

 private:
  struct Proposal {
    Eigen::VectorXd query;
    Eigen::VectorXd unit;
    double norm = 0.0;
    Interval support;
    int index = 0;
    bool guessed = false;
    double guess = 0.0;
    Side side = Side::First;
  };

  Proposal& prepare(const Eigen::VectorXd& q);

  ContextualSearch cs_;
  std::optional<Proposal> cache_;
  std::uint64_t nonce_ = 0;
};

}  // namespace nnpart
