#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/rng.hpp"

namespace nnpart {

enum class Metric { InnerProduct, L2, Lp };

Metric parse_metric(const std::string& name);
std::string metric_name(Metric m);

/// Hidden centers and the similarity δ(q, x) they are compared under:
/// -⟨q, x⟩, ‖q - x‖₂ or ‖q - x‖_p. Smaller is more similar.
class Environment {
 public:
  Environment(Metric metric, std::vector<Eigen::VectorXd> centers, double p = 2.0, double alpha = 1.0);

  Metric metric() const { return metric_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  int labels() const { return static_cast<int>(centers_.size()); }
  Eigen::Index dimension() const { return centers_.front().size(); }
  const std::vector<Eigen::VectorXd>& centers() const { return centers_; }

  double similarity(const Eigen::VectorXd& q, int i) const;
  /// Lowest index attaining the smallest δ.
  int truth(const Eigen::VectorXd& q) const;
  /// (δ(q, x_guess) - min_j δ(q, x_j))^α; zero for any minimizer.
  double exact_loss(const Eigen::VectorXd& q, int guess) const;
  /// Gap between the two smallest δ values.
  double margin(const Eigen::VectorXd& q) const;
  /// Smallest pairwise distance between centers in the environment's norm.
  double separation() const;

 private:
  Metric metric_;
  std::vector<Eigen::VectorXd> centers_;
  double p_;
  double alpha_;
};

/// k centers uniform in the unit ball with pairwise ‖·‖_p distance >= min_sep.
std::vector<Eigen::VectorXd> random_centers(int k, Eigen::Index d, std::uint64_t seed, double min_sep = 0.0,
                                            double p = 2.0);

/// T uniform-ball queries with margin(q) >= γ, by rejection (10⁶ tries per
/// query). Throws GenerationError when the margin is unattainable.
std::vector<Eigen::VectorXd> margin_stream(const Environment& env, double gamma, long T, std::uint64_t seed);

/// One query per line, whitespace-separated coordinates.
std::vector<Eigen::VectorXd> read_replay(const std::string& path, Eigen::Index d);

}  // namespace nnpart
