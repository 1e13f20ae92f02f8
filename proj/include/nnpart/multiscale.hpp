#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/kernels.hpp"
#include "nnpart/knowledge.hpp"
#include "nnpart/pairwise.hpp"

namespace nnpart {

struct MultiscaleOptions {
  double p = 2.5;
  Eigen::Index d = 1;
  double separation = 0.0;  // Δ, lower bound on ‖x1 - x2‖_p
  double c_scale = 100.0;
  double selection_constant = 1e3;
  double slack_constant = 3.0;
  int i_cap = 0;                   // 0: derive from max_lifted_dim
  Eigen::Index max_lifted_dim = 640;  // of S_i
  QuantileOptions sampling{2048, 256};

  void validate() const;
};

/// S_i over pairs (G_i(x1), G_i(x2)), starting from [-1, 1]^m.
struct ScaleSet {
  GeneralPKernel kernel;
  KnowledgeSet set;

  explicit ScaleSet(const GeneralPKernel& k);
  Eigen::Index dimension() const { return set.dimension(); }
};

/// Two-center learner for L^p with real p > 2. Updates the selected scale
/// every round (correct or not) with a slack cut.
class MultiscaleLearner final : public TwoCenterLearner {
 public:
  static constexpr int kBeyondCap = -1;

  MultiscaleLearner(MultiscaleOptions options, std::uint64_t seed);

  const MultiscaleOptions& options() const { return opt_; }
  int i_cap() const { return i_cap_; }

  /// sel · D_i · p · d² · (pδ_i)^p
  double threshold(int i) const;
  /// slack · d · (pδ_i)^p
  double slack(int i) const;
  const GeneralPKernel& kernel(int i) const;

  /// (-H_i(q), H_i(q))
  Eigen::VectorXd round_direction(int i, const Eigen::VectorXd& q) const;
  /// Smallest i in [1, i_cap] whose width reaches threshold(i), else kBeyondCap.
  int select_scale(const Eigen::VectorXd& q);

  Side predict(const Eigen::VectorXd& q) override;
  void observe(const Eigen::VectorXd& q, Side predicted, Side truth) override;
  double loss_bound(const Eigen::VectorXd& q) override;
  std::unique_ptr<TwoCenterLearner> clone() const override;
  std::size_t update_count() const override { return updates_; }
  int last_scale() const override { return cache_ ? cache_->scale : 0; }

  /// Scale sets created so far, keyed by i.
  const std::map<int, ScaleSet>& scales() const { return scales_; }
  /// (G_i(x1), G_i(x2))
  Eigen::VectorXd lifted_truth(int i, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const;
  /// Worst constraint violation of the lifted truth over all created scales.
  double truth_violation(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const;
  /// Positive-side volume fraction behind the last prediction (NaN if decided
  /// from the support interval alone).
  double last_fraction() const;

 private:
  struct Proposal {
    Eigen::VectorXd query;
    int scale = kBeyondCap;
    Eigen::VectorXd direction;
    Interval support;
    double bound = 0.0;
    bool predicted = false;
    Side side = Side::First;
    double fraction = 0.0;
  };

  Proposal& prepare(const Eigen::VectorXd& q);
  Interval support_at(int i, const Eigen::VectorXd& v) const;
  ScaleSet& scale_set(int i);

  MultiscaleOptions opt_;
  int i_cap_ = 1;
  std::uint64_t seed_;
  std::uint64_t nonce_ = 0;
  std::size_t updates_ = 0;
  std::map<int, ScaleSet> scales_;
  std::vector<GeneralPKernel> kernels_;  // index i - 1
  std::optional<Proposal> cache_;
};

}  // namespace nnpart
