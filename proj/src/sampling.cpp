#include "nnpart/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"
#include "nnpart/rng.hpp"

namespace nnpart {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this dimension the O(d²) covariance work per step outweighs the
// isotropic walk's cost, so directions stay isotropic.
constexpr Eigen::Index kAdaptMaxDim = 64;
constexpr std::size_t kFirstAdapt = 32;
}

Eigen::VectorXd interior_point(const ConvexBody& body) {
  const Eigen::Index d = body.dimension();
  const Eigen::Index m = body.halfspace_count();
  // Variables (v, r): maximize r with every slack ≥ r. r is capped so the
  // LP stays bounded for unbounded-looking inputs.
  LinearProgram lp(d + 1);
  lp.lower.head(d) = body.lower();
  lp.upper.head(d) = body.upper();
  lp.upper[d] = 1.0 + (body.upper() - body.lower()).maxCoeff();
  lp.objective[d] = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd row(d + 1);
    row.head(d) = body.normals().row(j).transpose();
    row[d] = 1.0;
    lp.add(std::move(row), Sense::LessEqual, body.offsets()[j]);
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd up = Eigen::VectorXd::Zero(d + 1);
    up[k] = 1.0;
    up[d] = 1.0;
    lp.add(up, Sense::LessEqual, body.upper()[k]);
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(d + 1);
    lo[k] = -1.0;
    lo[d] = 1.0;
    lp.add(lo, Sense::LessEqual, -body.lower()[k]);
  }
  const LpResult r = solve_lp(lp, Goal::Maximize);
  if (r.status != LpStatus::Optimal) throw SolverFailure("interior-point LP failed");
  if (r.value < -1e-9) throw EmptyBodyError("convex body is empty");
  return r.point.head(d);
}

void hit_and_run_walk(const ConvexBody& body, const Eigen::VectorXd& start, std::size_t n,
                      std::size_t burn_in, std::uint64_t seed, const SampleVisitor& visit) {
  const Eigen::Index d = body.dimension();
  const Eigen::Index m = body.halfspace_count();
  if (start.size() != d) throw InputError("hit-and-run start dimension mismatch");
  if (!body.polytope_contains(start, 1e-9)) throw InputError("hit-and-run start is not feasible");

  Rng rng(seed);
  Eigen::VectorXd x = start;
  Eigen::VectorXd slack = body.offsets() - body.normals() * x;
  Eigen::VectorXd au(m);
  // Half the directions follow the covariance of the points visited so far,
  // refit at doubling step counts. Thin elongated bodies otherwise take
  // (length/width)² isotropic steps to cross.
  const bool adapt = d <= kAdaptMaxDim;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd shape;
  std::size_t next_fit = kFirstAdapt;
  const std::size_t total = burn_in + n;
  for (std::size_t step = 0; step < total; ++step) {
    Eigen::VectorXd u = random_unit_vector(rng, d);
    if (shape.size() > 0 && uniform01(rng) < 0.5) {
      u = shape * u;
      const double norm = u.norm();
      if (norm > 0.0) u /= norm;
      else u = random_unit_vector(rng, d);
    }
    double tmin = -kInf;
    double tmax = kInf;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double hi = std::max(body.upper()[k] - x[k], 0.0);
      const double lo = std::min(body.lower()[k] - x[k], 0.0);
      if (u[k] > 0.0) {
        tmax = std::min(tmax, hi / u[k]);
        tmin = std::max(tmin, lo / u[k]);
      } else if (u[k] < 0.0) {
        tmax = std::min(tmax, lo / u[k]);
        tmin = std::max(tmin, hi / u[k]);
      }
    }
    if (m > 0) {
      au.noalias() = body.normals() * u;
      for (Eigen::Index j = 0; j < m; ++j) {
        const double s = std::max(slack[j], 0.0);
        if (au[j] > 0.0) tmax = std::min(tmax, s / au[j]);
        else if (au[j] < 0.0) tmin = std::max(tmin, s / au[j]);
      }
    }
    if (tmax > tmin) {
      const double t = tmin + uniform01(rng) * (tmax - tmin);
      x.noalias() += t * u;
      if (m > 0) {
        if ((step & 63) == 63) slack = body.offsets() - body.normals() * x;
        else slack.noalias() -= t * au;
      }
    }
    if (adapt) {
      const double count = static_cast<double>(step + 1);
      const Eigen::VectorXd delta = x - mean;
      mean.noalias() += delta / count;
      scatter.noalias() += delta * (x - mean).transpose();
      if (step + 1 == next_fit) {
        next_fit *= 2;
        const Eigen::MatrixXd cov = scatter / count;
        const double floor = 1e-12 * std::max(cov.trace(), 1e-300);
        Eigen::LLT<Eigen::MatrixXd> llt(cov + floor * Eigen::MatrixXd::Identity(d, d));
        if (llt.info() == Eigen::Success) shape = llt.matrixL();
      }
    }
    if (step >= burn_in) visit(x);
  }
}

std::vector<Eigen::VectorXd> hit_and_run(const ConvexBody& body, std::size_t n, std::size_t burn_in,
                                         std::uint64_t seed) {
  if (n == 0 || burn_in == 0) throw InputError("hit-and-run needs n ≥ 1 and burn_in ≥ 1");
  if (body.expansion() != 0.0) throw InputError("hit-and-run samples polytopes (expansion 0)");
  const Eigen::VectorXd start = interior_point(body);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  hit_and_run_walk(body, start, n, burn_in, seed, [&](const Eigen::VectorXd& x) { out.push_back(x); });
  return out;
}

double directional_quantile_from(const ConvexBody& body, const Eigen::VectorXd& start,
                                 const Eigen::VectorXd& direction, double q, std::uint64_t seed,
                                 const QuantileOptions& options) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("quantile level must lie in (0, 1)");
  if (direction.size() != body.dimension()) throw InputError("direction dimension mismatch");
  if (options.samples == 0) throw InputError("quantile needs at least one sample");
  std::vector<double> proj;
  proj.reserve(options.samples);
  const double z = body.expansion();
  Rng ball_rng(derive_seed(seed, 2));
  hit_and_run_walk(body, start, options.samples, options.burn_in, derive_seed(seed, 1),
                   [&](const Eigen::VectorXd& x) {
                     double value = direction.dot(x);
                     if (z > 0.0) value += z * direction.dot(random_in_ball(ball_rng, x.size()));
                     proj.push_back(value);
                   });
  std::sort(proj.begin(), proj.end());
  const double pos = q * static_cast<double>(proj.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, proj.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return proj[lo] + frac * (proj[hi] - proj[lo]);
}

double directional_quantile(const ConvexBody& body, const Eigen::VectorXd& direction, double q,
                            std::uint64_t seed, const QuantileOptions& options) {
  return directional_quantile_from(body, interior_point(body), direction, q, seed, options);
}

BoundingBox bounding_box(const ConvexBody& body) {
  const Eigen::Index d = body.dimension();
  BoundingBox box{Eigen::VectorXd(d), Eigen::VectorXd(d)};
  const double z = body.expansion();
  if (body.halfspace_count() == 0) {
    box.lower = body.lower().array() - z;
    box.upper = body.upper().array() + z;
    return box;
  }
  auto v = find_vertex(body);
  if (!v) throw EmptyBodyError("bounding box of an empty body");
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(d, k);
    box.upper[k] = maximize_from(body, e, *v).value + z;
    box.lower[k] = -maximize_from(body, -e, *v).value - z;
  }
  return box;
}

RejectionSample rejection_sample(const ConvexBody& body, std::size_t n, std::uint64_t seed,
                                 std::size_t max_attempts) {
  RejectionSample out;
  out.box = bounding_box(body);
  if (max_attempts == 0) max_attempts = 5000 * n + 100000;
  Rng rng(seed);
  const Eigen::Index d = body.dimension();
  const Eigen::VectorXd span = out.box.upper - out.box.lower;
  out.points.reserve(n);
  Eigen::VectorXd x(d);
  while (out.points.size() < n) {
    if (out.attempts >= max_attempts)
      throw EmptyBodyError("rejection sampler exceeded its attempt budget");
    ++out.attempts;
    for (Eigen::Index k = 0; k < d; ++k) x[k] = out.box.lower[k] + uniform01(rng) * span[k];
    if (membership(body, x)) out.points.push_back(x);
  }
  return out;
}

double log_ball_volume(Eigen::Index dim, double radius) {
  const double d = static_cast<double>(dim);
  return 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0) + d * std::log(radius);
}

Estimate estimate_log_volume(const ConvexBody& body, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("volume estimate needs samples");
  const BoundingBox box = bounding_box(body);
  const Eigen::Index d = body.dimension();
  const Eigen::VectorXd span = box.upper - box.lower;
  double log_box = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) log_box += std::log(std::max(span[k], 1e-300));
  Rng rng(seed);
  std::size_t hits = 0;
  Eigen::VectorXd x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) x[k] = box.lower[k] + uniform01(rng) * span[k];
    if (membership(body, x)) ++hits;
  }
  const double nn = static_cast<double>(n);
  const double f = hits > 0 ? static_cast<double>(hits) / nn : 0.5 / nn;
  return Estimate{log_box + std::log(f), std::sqrt((1.0 - f) / (nn * f))};
}

Estimate estimate_volume_ratio(const ConvexBody& outer, const ConvexBody& inner, std::size_t n,
                               std::uint64_t seed) {
  if (outer.dimension() != inner.dimension()) throw InputError("volume ratio: dimension mismatch");
  const RejectionSample s = rejection_sample(outer, n, seed);
  std::size_t inside = 0;
  for (const auto& x : s.points)
    if (membership(inner, x)) ++inside;
  const double nn = static_cast<double>(n);
  const double r = static_cast<double>(inside) / nn;
  return Estimate{r, std::sqrt(std::max(r * (1.0 - r), 0.25 / nn) / nn)};
}

}  // namespace nnpart
