#include "nnpart/knowledge.hpp"

#include <algorithm>
#include <cmath>

#include "nnpart/errors.hpp"
#include "nnpart/rng.hpp"

namespace nnpart {

double ScaleSchedule::z(int i) const {
  return std::ldexp(1.0, -i) / (8.0 * static_cast<double>(d));
}

void ScaleSchedule::validate() const {
  if (d < 1) throw ConfigError("schedule dimension must be positive");
  if (!(alpha > 0.0)) throw ConfigError("schedule alpha must be positive");
  if (i_min > i_max) throw ConfigError("schedule needs i_min <= i_max");
}

ScaleSchedule ScaleSchedule::for_horizon(Eigen::Index d, double alpha, long horizon, int i_min) {
  const double td = static_cast<double>(std::max(horizon, 1L)) * static_cast<double>(d);
  ScaleSchedule s{d, alpha, i_min, static_cast<int>(std::ceil(std::log2(td))) + 4};
  s.i_max = std::max(s.i_max, i_min);
  s.validate();
  return s;
}

int select_index(const ScaleSchedule& schedule, double width) {
  if (!(width > 0.0)) return schedule.i_max;
  int i = static_cast<int>(std::floor(-std::log2(width)));
  while (std::ldexp(1.0, -i) < width) --i;
  while (std::ldexp(1.0, -(i + 1)) >= width) ++i;
  return std::clamp(i, schedule.i_min, schedule.i_max);
}

namespace {

constexpr Eigen::Index kRecentreMaxDim = 64;

}  // namespace

KnowledgeSet::KnowledgeSet(Eigen::Index dim, double radius)
    : KnowledgeSet(Eigen::VectorXd::Constant(dim, -radius), Eigen::VectorXd::Constant(dim, radius)) {}

KnowledgeSet::KnowledgeSet(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : body_(std::move(lower), std::move(upper)) {
  anchor_ = box_corner(body_);
  interior_ = 0.5 * (body_.lower() + body_.upper());
}

Interval KnowledgeSet::support_interval(const Eigen::VectorXd& direction) const {
  if (direction.size() != dimension()) throw InputError("direction dimension mismatch");
  if (dimension() > kActiveSetMaxDim) {
    return Interval{-maximize_polytope(body_, -direction).value, maximize_polytope(body_, direction).value};
  }
  const double hi = maximize_from(body_, direction, anchor_).value;
  const double lo = -maximize_from(body_, -direction, anchor_).value;
  return Interval{lo, std::max(hi, lo)};
}

double KnowledgeSet::width(const Eigen::VectorXd& direction) const {
  return support_interval(direction).width();
}

void KnowledgeSet::cut(const Eigen::VectorXd& normal, double offset, Sense sense) {
  if (normal.size() != dimension()) throw InputError("cut dimension mismatch");
  if (sense == Sense::Equal) throw InputError("cuts are inequalities");
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InputError("cut normal must be nonzero");
  Eigen::VectorXd a = normal / n;
  double b = offset / n;
  if (sense == Sense::GreaterEqual) {
    a = -a;
    b = -b;
  }

  const double hi = dimension() > kActiveSetMaxDim ? maximize_polytope(body_, a).value
                                                    : maximize_from(body_, a, anchor_).value;
  if (hi <= b) {
    log_.push_back(Cut{std::move(a), b, true});
    return;
  }
  SupportPoint low = dimension() > kActiveSetMaxDim ? maximize_polytope(body_, -a)
                                                     : maximize_from(body_, -a, anchor_);
  const double lo = -low.value;
  if (lo > b + 1e-9) throw InconsistentFeedback("cut empties the knowledge set");

  // The old interior point stays strictly inside unless the cut reaches it;
  // otherwise walk toward the minimizing vertex until halfway into the slab.
  const double ap = a.dot(interior_);
  if (ap >= b) {
    const Eigen::VectorXd& vstar = low.vertex.point;
    const double target = 0.5 * (b + lo);
    const double t = ap > lo ? std::clamp((ap - target) / (ap - lo), 0.0, 1.0) : 1.0;
    interior_ = interior_ + t * (vstar - interior_);
  }
  body_.add_halfspace(a, b);
  // Cuts through a common point leave a thin cone and an interior point near
  // its apex, where random walks barely move. Recentre on the inscribed ball
  // while that LP is cheap.
  if (dimension() <= kRecentreMaxDim) {
    if (auto ball = chebyshev_center(body_); ball && ball->radius > 0.0) interior_ = ball->center;
  }
  if (dimension() <= kActiveSetMaxDim) anchor_ = std::move(low.vertex);
  log_.push_back(Cut{std::move(a), b, false});
}

double median_guess(const KnowledgeSet& k, int i, const Eigen::VectorXd& direction,
                    const ScaleSchedule& schedule, std::uint64_t seed, const QuantileOptions& options,
                    const std::optional<Interval>& clamp) {
  const ConvexBody grown = k.body().expanded(schedule.z(i));
  const double g = directional_quantile_from(grown, k.interior(), direction, 0.5, seed, options);
  if (!clamp) return g;
  return std::clamp(g, clamp->lo, clamp->hi);
}

Estimate potential(const KnowledgeSet& k, const ScaleSchedule& schedule, std::size_t n, std::uint64_t seed) {
  schedule.validate();
  double value = 0.0;
  double var = 0.0;
  for (int i = schedule.i_min; i <= schedule.i_max; ++i) {
    const double z = schedule.z(i);
    const double w = std::pow(2.0, -schedule.alpha * static_cast<double>(i));
    const Estimate lv = estimate_log_volume(k.body().expanded(z), n,
                                            derive_seed(seed, static_cast<std::uint64_t>(i - schedule.i_min)));
    // The true ratio is at least 1, so a negative log is pure noise.
    const double term = std::max(0.0, lv.value - log_ball_volume(k.dimension(), z));
    value += w * term;
    var += w * w * lv.std_error * lv.std_error;
  }
  return Estimate{value, std::sqrt(var)};
}

}  // namespace nnpart
