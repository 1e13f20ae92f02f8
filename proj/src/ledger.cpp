#include "nnpart/ledger.hpp"

#include <cmath>
#include <cstdio>

#include "nnpart/errors.hpp"

namespace nnpart {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void LossLedger::add(long round, int guess, int truth, double loss, double loss_bound, int scale_index,
                     double margin) {
  if (!(loss >= 0.0) || !std::isfinite(loss)) throw InvariantViolation("ledger: loss must be finite and >= 0");
  LedgerRecord r;
  r.round = round;
  r.guess = guess;
  r.truth = truth;
  r.loss = loss;
  r.loss_bound = loss_bound;
  r.mistake = loss > 0.0;
  r.robust_mistake = r.mistake && gamma_ > 0.0 && margin >= gamma_;
  r.scale_index = scale_index;
  r.cum_loss = total_loss() + loss;
  mistakes_ += r.mistake;
  robust_ += r.robust_mistake;
  records_.push_back(r);
}

double LossLedger::loss_between(long from, long to) const {
  double s = 0.0;
  for (const auto& r : records_)
    if (r.round > from && r.round <= to) s += r.loss;
  return s;
}

void LossLedger::write_csv(std::ostream& out) const {
  out << "round,guess,truth,loss,loss_bound,mistake,robust_mistake,scale_index,cum_loss\n";
  for (const auto& r : records_) {
    out << r.round << ',' << r.guess + 1 << ',' << r.truth + 1 << ',' << format_number(r.loss) << ','
        << format_number(r.loss_bound) << ',' << (r.mistake ? 1 : 0) << ',' << (r.robust_mistake ? 1 : 0) << ','
        << r.scale_index << ',' << format_number(r.cum_loss) << '\n';
  }
}

}  // namespace nnpart
