#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/convex_body.hpp"

namespace nnpart {

/// A strictly interior point of the polytope part when one exists, found by
/// maximizing the smallest constraint slack. Flat (lower-dimensional) bodies
/// return a relative-boundary point. Throws EmptyBodyError if empty.
Eigen::VectorXd interior_point(const ConvexBody& body);

using SampleVisitor = std::function<void(const Eigen::VectorXd&)>;

/// Hit-and-run over the polytope part starting at a feasible `start`.
/// Visits `n` consecutive states after `burn_in` discarded steps.
void hit_and_run_walk(const ConvexBody& body, const Eigen::VectorXd& start, std::size_t n,
                      std::size_t burn_in, std::uint64_t seed, const SampleVisitor& visit);

/// `n` hit-and-run points of a body with expansion 0.
std::vector<Eigen::VectorXd> hit_and_run(const ConvexBody& body, std::size_t n, std::size_t burn_in,
                                         std::uint64_t seed);

struct QuantileOptions {
  std::size_t samples = 4096;
  std::size_t burn_in = 256;
};

/// Empirical q-quantile of ⟨direction, v⟩ for v drawn from the body; the
/// expansion is realized as polytope sample + z·(uniform ball sample).
double directional_quantile(const ConvexBody& body, const Eigen::VectorXd& direction, double q,
                            std::uint64_t seed, const QuantileOptions& options = {});

/// Same, starting the walk from a known feasible point.
double directional_quantile_from(const ConvexBody& body, const Eigen::VectorXd& start,
                                 const Eigen::VectorXd& direction, double q, std::uint64_t seed,
                                 const QuantileOptions& options = {});

/// Axis-aligned bounding box of the body (expansion included).
struct BoundingBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};
BoundingBox bounding_box(const ConvexBody& body);

/// Uniform draws from the body by rejection from its bounding box.
struct RejectionSample {
  std::vector<Eigen::VectorXd> points;
  std::size_t attempts = 0;
  BoundingBox box;
};
RejectionSample rejection_sample(const ConvexBody& body, std::size_t n, std::uint64_t seed,
                                 std::size_t max_attempts = 0);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// log Vol(body) from the bounding-box acceptance rate; the standard error
/// is the delta-method error of the log.
Estimate estimate_log_volume(const ConvexBody& body, std::size_t n, std::uint64_t seed);

/// Vol(inner)/Vol(outer) for inner ⊆ outer, as the fraction of uniform
/// draws from `outer` that land in `inner`.
Estimate estimate_volume_ratio(const ConvexBody& outer, const ConvexBody& inner, std::size_t n,
                               std::uint64_t seed);

/// log of the volume of the Euclidean ball of radius r in dimension d.
double log_ball_volume(Eigen::Index dim, double radius);

}  // namespace nnpart
