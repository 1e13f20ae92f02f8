#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "nnpart/knowledge.hpp"

namespace nnpart {

/// low: ⟨x, p⟩ >= g.  high: ⟨x, p⟩ <= g.
enum class Feedback { Low, High };

struct CSearchGuess {
  double guess = 0.0;
  int index = 0;
  Interval support;  // of K in the query direction
};

/// Contextual search for a hidden vector p with high/low feedback.
class ContextualSearch {
 public:
  ContextualSearch(ScaleSchedule schedule, QuantileOptions quantile, std::uint64_t seed);

  /// Guess for ⟨x, p⟩ at the index picked from the current width. Does not
  /// change the state; the sampler seed is derived from (seed, rounds, nonce).
  CSearchGuess guess(const Eigen::VectorXd& x, std::uint64_t nonce = 0) const;

  void feedback(const Eigen::VectorXd& x, double g, Feedback sign);

  const KnowledgeSet& knowledge() const { return k_; }
  const ScaleSchedule& schedule() const { return schedule_; }
  long rounds() const { return rounds_; }

 private:
  ScaleSchedule schedule_;
  QuantileOptions quantile_;
  std::uint64_t seed_;
  KnowledgeSet k_;
  long rounds_ = 0;
};

void require_unit(const Eigen::VectorXd& x, const char* what);

}  // namespace nnpart
