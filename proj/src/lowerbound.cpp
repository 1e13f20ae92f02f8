#include "nnpart/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"
#include "nnpart/lp.hpp"

namespace nnpart {

namespace {

// Coefficients α with Σα = 1 minimizing ‖Σ α_i p_i‖ over the affine hull.
Eigen::VectorXd affine_min_norm(const std::vector<Eigen::VectorXd>& pts, const std::vector<std::size_t>& s) {
  const Eigen::Index n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = pts[s[static_cast<std::size_t>(i)]].dot(pts[s[static_cast<std::size_t>(j)]]);
  a.row(n).setOnes();
  a.col(n).setOnes();
  a(n, n) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  return a.completeOrthogonalDecomposition().solve(rhs).head(n);
}

// Max-margin h with ⟨h, a⟩ >= m on `first` and <= -m on `second`
// (‖h‖∞ <= 1 before normalizing).
std::pair<Eigen::VectorXd, double> max_margin(Eigen::Index d, const std::vector<Eigen::VectorXd>& first,
                                              const std::vector<Eigen::VectorXd>& second) {
  LinearProgram lp(d + 1);
  lp.lower.head(d).setConstant(-1.0);
  lp.upper.head(d).setConstant(1.0);
  lp.upper[d] = 1.0;
  lp.objective[d] = 1.0;
  for (const auto& a : first) {
    Eigen::VectorXd row(d + 1);
    row << a, -1.0;
    lp.add(row, Sense::GreaterEqual, 0.0);
  }
  for (const auto& b : second) {
    Eigen::VectorXd row(d + 1);
    row << b, 1.0;
    lp.add(row, Sense::LessEqual, 0.0);
  }
  const LpResult r = solve_lp(lp, Goal::Maximize);
  if (!r.optimal()) throw SolverFailure("separating-hyperplane LP failed");
  Eigen::VectorXd h = r.point.head(d);
  const double n = h.norm();
  if (!(n > 0.0)) return {h, 0.0};
  h /= n;
  // Margin measured on the points themselves, not the LP's objective value.
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : first) m = std::min(m, a.dot(h));
  for (const auto& b : second) m = std::min(m, -b.dot(h));
  return {h, m};
}

}  // namespace

Eigen::VectorXd min_norm_point(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.empty()) throw InputError("min-norm point of an empty set");
  double scale = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    scale = std::max(scale, pts[i].squaredNorm());
    if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
  }
  const double tol = 1e-12 * std::max(scale, 1e-300);
  std::vector<std::size_t> s{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = pts[start];

  for (int major = 0; major < 10000; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double v = x.dot(pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tol) return x;
    if (std::find(s.begin(), s.end(), j) != s.end()) return x;
    s.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const Eigen::VectorXd alpha = affine_min_norm(pts, s);
      bool positive = true;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) positive = positive && alpha[i] > 1e-14;
      if (positive) {
        for (std::size_t i = 0; i < s.size(); ++i) lambda[i] = alpha[static_cast<Eigen::Index>(i)];
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double a = alpha[static_cast<Eigen::Index>(i)];
        if (a <= 1e-14 && lambda[i] - a > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      std::vector<std::size_t> ns;
      std::vector<double> nl;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double l = lambda[i] + theta * (alpha[static_cast<Eigen::Index>(i)] - lambda[i]);
        if (l > 1e-14) {
          ns.push_back(s[i]);
          nl.push_back(l);
        }
      }
      double total = 0.0;
      for (double l : nl) total += l;
      for (double& l : nl) l /= total;
      s = std::move(ns);
      lambda = std::move(nl);
    }
    x.setZero();
    for (std::size_t i = 0; i < s.size(); ++i) x += lambda[i] * pts[s[i]];
  }
  return x;
}

double hull_distance(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& points) {
  std::vector<Eigen::VectorXd> shifted;
  shifted.reserve(points.size());
  for (const auto& p : points) shifted.push_back(p - q);
  return min_norm_point(shifted).norm();
}

LowerBoundAdversary::LowerBoundAdversary(Eigen::Index d, long horizon, std::uint64_t seed, long max_tries)
    : d_(d), horizon_(horizon), max_tries_(max_tries), rng_(seed), last_normal_(Eigen::VectorXd::Unit(d, 0)) {
  if (d < 5) throw ConfigError("lower-bound adversary needs d >= 5");
  if (horizon < 2) throw ConfigError("lower-bound adversary needs T >= 2");
  eps_ = std::pow(static_cast<double>(horizon), -1.0 / static_cast<double>(d - 2));
}

std::pair<Eigen::VectorXd, double> LowerBoundAdversary::separating_hyperplane() const {
  return max_margin(d_, sets_[0], sets_[1]);
}

LowerBoundAdversary::Step LowerBoundAdversary::step() {
  Step out;
  if (all_.size() < 2) {
    out.label = static_cast<int>(all_.size());
    out.point = Eigen::VectorXd::Unit(d_, 0) * (out.label == 0 ? 1.0 : -1.0);
    out.separation_margin = 1.0;
  } else {
    // The separator cone roughly halves with every random label, so the
    // margin decays geometrically and eventually sinks into round-off. The
    // LP's best hyperplane is still used then; the margin is reported as is.
    try {
      auto [normal, margin] = separating_hyperplane();
      out.separation_margin = margin;
      if (normal.norm() > 0.0) last_normal_ = normal;
    } catch (const SolverFailure&) {
      out.separation_margin = -std::numeric_limits<double>::infinity();
    }
    const Eigen::VectorXd& h = last_normal_;
    bool found = false;
    for (long t = 0; t < max_tries_ && !found; ++t) {
      Eigen::VectorXd u = gaussian_vector(rng_, d_);
      u -= u.dot(h) * h;
      const double n = u.norm();
      if (!(n > 1e-12)) continue;
      u /= n;
      bool far = true;
      for (const auto& x : all_) {
        if ((x - u).norm() < eps_) {
          far = false;
          break;
        }
      }
      if (far) {
        out.point = std::move(u);
        found = true;
      }
    }
    if (!found) throw AdversaryExhausted("no point on the hyperplane keeps distance ε");
    out.label = static_cast<int>(rng_() & 1ULL);
  }
  sets_[out.label].push_back(out.point);
  all_.push_back(out.point);
  return out;
}

double LowerBoundAdversary::region_distance(const Eigen::VectorXd& q, int label) const {
  const auto& pts = sets_[label];
  if (pts.empty()) return 0.0;
  return hull_distance(q, pts);
}

double LowerBoundAdversary::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all_.size(); ++i)
    for (std::size_t j = i + 1; j < all_.size(); ++j) best = std::min(best, (all_[i] - all_[j]).norm());
  return best;
}

}  // namespace nnpart
