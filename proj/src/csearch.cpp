#include "nnpart/csearch.hpp"

#include <cmath>
#include <string>

#include "nnpart/errors.hpp"
#include "nnpart/rng.hpp"

namespace nnpart {

void require_unit(const Eigen::VectorXd& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > 1e-9) throw InputError(std::string(what) + " must be a unit vector");
}

ContextualSearch::ContextualSearch(ScaleSchedule schedule, QuantileOptions quantile, std::uint64_t seed)
    : schedule_(schedule), quantile_(quantile), seed_(seed), k_(schedule.d) {
  schedule_.validate();
}

CSearchGuess ContextualSearch::guess(const Eigen::VectorXd& x, std::uint64_t nonce) const {
  require_unit(x, "query");
  CSearchGuess out;
  out.support = k_.support_interval(x);
  out.index = select_index(schedule_, out.support.width());
  if (out.support.width() <= 0.0) {
    out.guess = out.support.lo;
    return out;
  }
  const std::uint64_t seed = derive_seed(seed_, static_cast<std::uint64_t>(rounds_), nonce);
  out.guess = median_guess(k_, out.index, x, schedule_, seed, quantile_, out.support);
  return out;
}

void ContextualSearch::feedback(const Eigen::VectorXd& x, double g, Feedback sign) {
  require_unit(x, "query");
  k_.cut(x, g, sign == Feedback::High ? Sense::LessEqual : Sense::GreaterEqual);
  ++rounds_;
}

}  // namespace nnpart
