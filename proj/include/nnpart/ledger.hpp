#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nnpart {

struct LedgerRecord {
  long round = 0;
  int guess = 0;  // 0-based; written 1-based
  int truth = 0;
  double loss = 0.0;
  double loss_bound = 0.0;
  bool mistake = false;
  bool robust_mistake = false;
  int scale_index = 0;
  double cum_loss = 0.0;
};

/// Per-round losses of one episode. A mistake is a round with positive loss.
class LossLedger {
 public:
  explicit LossLedger(double robust_gamma = 0.0) : gamma_(robust_gamma) {}

  /// Fills mistake flags and cum_loss; a mistake is robust when the query's
  /// margin is at least γ. Throws InvariantViolation on negative or
  /// non-finite loss.
  void add(long round, int guess, int truth, double loss, double loss_bound, int scale_index, double margin);

  const std::vector<LedgerRecord>& records() const { return records_; }
  std::size_t rounds() const { return records_.size(); }
  double robust_gamma() const { return gamma_; }
  double total_loss() const { return records_.empty() ? 0.0 : records_.back().cum_loss; }
  long mistakes() const { return mistakes_; }
  long robust_mistakes() const { return robust_; }
  /// Sum of losses over rounds in (from, to], 1-based.
  double loss_between(long from, long to) const;

  void write_csv(std::ostream& out) const;

 private:
  double gamma_;
  std::vector<LedgerRecord> records_;
  long mistakes_ = 0;
  long robust_ = 0;
};

/// 12 significant digits, the format of every number in output files.
std::string format_number(double x);

}  // namespace nnpart
