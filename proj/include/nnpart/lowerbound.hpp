#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/rng.hpp"

namespace nnpart {

/// Min-norm point of conv(points) (Wolfe's algorithm).
Eigen::VectorXd min_norm_point(const std::vector<Eigen::VectorXd>& points);

/// Euclidean distance from q to conv(points).
double hull_distance(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& points);

/// Sphere-packing adversary for convex regions: every new point lies on a
/// hyperplane separating the two label cones and keeps distance ε from all
/// earlier points, then gets a uniform random label. The margin of the
/// hyperplane decays geometrically, so past some horizon it is only
/// separating up to round-off; each step reports the margin it measured.
class LowerBoundAdversary {
 public:
  struct Step {
    Eigen::VectorXd point;
    int label = 0;
    double separation_margin = 0.0;  // of the hyperplane used, measured on the points (1 for seeds)
  };

  LowerBoundAdversary(Eigen::Index d, long horizon, std::uint64_t seed, long max_tries = 200000);

  Eigen::Index dimension() const { return d_; }
  long horizon() const { return horizon_; }
  /// ε = T^(-1/(d-2))
  double epsilon() const { return eps_; }
  /// ε²/2, the smallest distance from a new point to the hull of earlier ones.
  double loss_floor() const { return 0.5 * eps_ * eps_; }

  /// e₁ (label 1), then -e₁ (label 2), then packed points. Throws
  /// AdversaryExhausted when no admissible point turns up.
  Step step();

  const std::vector<Eigen::VectorXd>& points(int label) const { return sets_[label]; }
  std::size_t size() const { return sets_[0].size() + sets_[1].size(); }
  /// Every point so far, in emission order.
  const std::vector<Eigen::VectorXd>& emitted() const { return all_; }

  /// Unit h and margin m maximizing m with ⟨h, a⟩ >= m on label 1 and
  /// ⟨h, b⟩ <= -m on label 2 (‖h‖∞ <= 1 before normalizing). A positive
  /// margin certifies that the two cones meet only at the origin.
  std::pair<Eigen::VectorXd, double> separating_hyperplane() const;

  /// Distance from q to the hull of the earlier points carrying `label`.
  double region_distance(const Eigen::VectorXd& q, int label) const;
  /// Smallest Euclidean distance between any two emitted points.
  double min_pairwise_distance() const;

 private:
  Eigen::Index d_;
  long horizon_;
  double eps_;
  long max_tries_;
  Rng rng_;
  std::vector<Eigen::VectorXd> sets_[2];
  std::vector<Eigen::VectorXd> all_;
  Eigen::VectorXd last_normal_;
};

}  // namespace nnpart
