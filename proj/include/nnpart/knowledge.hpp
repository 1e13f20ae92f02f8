#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/convex_body.hpp"
#include "nnpart/sampling.hpp"

namespace nnpart {

/// Scales z(i) = 2^-i / (8d) for i in [i_min, i_max].
struct ScaleSchedule {
  Eigen::Index d = 1;
  double alpha = 1.0;
  int i_min = -2;
  int i_max = 16;

  double z(int i) const;
  void validate() const;

  /// i_max = ceil(log2(T·d)) + 4.
  static ScaleSchedule for_horizon(Eigen::Index d, double alpha, long horizon, int i_min = -2);
};

/// Largest i with width <= 2^-i, clamped to [i_min, i_max]. A width of zero
/// maps to i_max.
int select_index(const ScaleSchedule& schedule, double width);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct Cut {
  Eigen::VectorXd normal;  // unit
  double offset = 0.0;     // ⟨normal, v⟩ <= offset
  bool redundant = false;  // already implied when applied
};

/// Feasible set for a hidden vector: box ∩ halfspaces.
///
/// Keeps a vertex (warm start for support queries) and a strictly interior
/// point (start for random walks) up to date across cuts.
class KnowledgeSet {
 public:
  explicit KnowledgeSet(Eigen::Index dim, double radius = 2.0);
  KnowledgeSet(Eigen::VectorXd lower, Eigen::VectorXd upper);

  Eigen::Index dimension() const { return body_.dimension(); }
  const ConvexBody& body() const { return body_; }
  const std::vector<Cut>& cut_log() const { return log_; }
  std::size_t cut_count() const { return log_.size(); }
  const Eigen::VectorXd& interior() const { return interior_; }

  /// [min, max] of ⟨direction, v⟩ over the set.
  Interval support_interval(const Eigen::VectorXd& direction) const;
  double width(const Eigen::VectorXd& direction) const;

  /// Intersects with ⟨normal, v⟩ (sense) offset. Throws InconsistentFeedback
  /// if the result is empty; the set is unchanged in that case.
  void cut(const Eigen::VectorXd& normal, double offset, Sense sense = Sense::LessEqual);

  bool contains(const Eigen::VectorXd& point, double tol = 1e-9) const {
    return body_.polytope_contains(point, tol);
  }

 private:
  ConvexBody body_;
  Vertex anchor_;
  Eigen::VectorXd interior_;
  std::vector<Cut> log_;
};

/// Median of ⟨direction, v⟩ over K + z(i)B, clamped into K's own support
/// interval when that interval is supplied.
double median_guess(const KnowledgeSet& k, int i, const Eigen::VectorXd& direction,
                    const ScaleSchedule& schedule, std::uint64_t seed, const QuantileOptions& options = {},
                    const std::optional<Interval>& clamp = std::nullopt);

/// Φ(K) = Σ_i 2^(-αi) log(Vol(K + z_i B) / Vol(z_i B)), each term estimated
/// by box rejection with `n` draws.
Estimate potential(const KnowledgeSet& k, const ScaleSchedule& schedule, std::size_t n, std::uint64_t seed);

}  // namespace nnpart
