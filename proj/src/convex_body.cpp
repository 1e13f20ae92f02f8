#include "nnpart/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"

namespace nnpart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A·s and b - A·v for every constraint of the polytope part.
void constraint_products(const ConvexBody& body, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
  const Eigen::Index d = body.dimension();
  out.resize(body.constraint_count());
  out.head(d) = s;
  out.segment(d, d) = -s;
  if (body.halfspace_count() > 0) out.tail(body.halfspace_count()).noalias() = body.normals() * s;
}

void constraint_slacks(const ConvexBody& body, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
  const Eigen::Index d = body.dimension();
  out.resize(body.constraint_count());
  out.head(d) = body.upper() - v;
  out.segment(d, d) = v - body.lower();
  if (body.halfspace_count() > 0)
    out.tail(body.halfspace_count()) = body.offsets() - body.normals() * v;
}

Eigen::MatrixXd active_matrix(const ConvexBody& body, const std::vector<Eigen::Index>& active) {
  const Eigen::Index d = body.dimension();
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    a.row(r) = body.constraint_normal(active[static_cast<std::size_t>(r)]).transpose();
  return a;
}

void refactor(const ConvexBody& body, Vertex& v) {
  const Eigen::Index d = body.dimension();
  const Eigen::MatrixXd a = active_matrix(body, v.active);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw SolverFailure("active-set basis became singular");
  v.basis_inverse = lu.inverse();
  Eigen::VectorXd b(d);
  for (Eigen::Index r = 0; r < d; ++r) b[r] = body.constraint_offset(v.active[static_cast<std::size_t>(r)]);
  v.point = v.basis_inverse * b;
}

}  // namespace

ConvexBody::ConvexBody(Eigen::VectorXd lower, Eigen::VectorXd upper, double expansion)
    : lower_(std::move(lower)), upper_(std::move(upper)), expansion_(expansion) {
  if (lower_.size() == 0 || lower_.size() != upper_.size())
    throw InputError("convex body: box bounds must be nonempty and of equal dimension");
  if (!lower_.allFinite() || !upper_.allFinite()) throw InputError("convex body: box bounds must be finite");
  if ((lower_.array() > upper_.array()).any()) throw InputError("convex body: empty box");
  if (!(expansion_ >= 0.0) || !std::isfinite(expansion_))
    throw InputError("convex body: expansion must be a nonnegative finite scalar");
  normals_.resize(0, lower_.size());
  offsets_.resize(0);
}

ConvexBody ConvexBody::cube(Eigen::Index dim, double lo, double hi) {
  return ConvexBody(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

void ConvexBody::add_halfspace(const Eigen::VectorXd& normal, double offset) {
  if (normal.size() != dimension()) throw InputError("halfspace dimension mismatch");
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset))
    throw InputError("halfspace normal must be nonzero and finite");
  if (rows_ == normals_.rows()) {
    const Eigen::Index cap = std::max<Eigen::Index>(8, 2 * rows_);
    normals_.conservativeResize(cap, dimension());
    offsets_.conservativeResize(cap);
  }
  normals_.row(rows_) = (normal / n).transpose();
  offsets_[rows_] = offset / n;
  ++rows_;
}

ConvexBody ConvexBody::expanded(double z) const {
  ConvexBody out(*this);
  if (!(z >= 0.0) || !std::isfinite(z)) throw InputError("expansion must be nonnegative");
  out.expansion_ = z;
  return out;
}

Eigen::VectorXd ConvexBody::constraint_normal(Eigen::Index idx) const {
  const Eigen::Index d = dimension();
  if (idx < d) return Eigen::VectorXd::Unit(d, idx);
  if (idx < 2 * d) return -Eigen::VectorXd::Unit(d, idx - d);
  return normals_.row(idx - 2 * d).transpose();
}

double ConvexBody::constraint_offset(Eigen::Index idx) const {
  const Eigen::Index d = dimension();
  if (idx < d) return upper_[idx];
  if (idx < 2 * d) return -lower_[idx - d];
  return offsets_[idx - 2 * d];
}

double ConvexBody::polytope_violation(const Eigen::VectorXd& point) const {
  if (point.size() != dimension()) throw InputError("point dimension mismatch");
  double worst = std::max((lower_ - point).maxCoeff(), (point - upper_).maxCoeff());
  if (rows_ > 0) worst = std::max(worst, (normals() * point - offsets()).maxCoeff());
  return std::max(worst, 0.0);
}

LinearProgram ConvexBody::to_linear_program() const {
  LinearProgram lp(dimension());
  lp.lower = lower_;
  lp.upper = upper_;
  for (Eigen::Index j = 0; j < rows_; ++j)
    lp.add(normals_.row(j).transpose(), Sense::LessEqual, offsets_[j]);
  return lp;
}

Eigen::VectorXd project_onto_polytope(const ConvexBody& body, const Eigen::VectorXd& point, double tol,
                                      int max_sweeps) {
  if (point.size() != body.dimension()) throw InputError("point dimension mismatch");
  if (body.polytope_contains(point, 0.0)) return point;
  const Eigen::Index m = body.halfspace_count();
  const Eigen::Index d = body.dimension();
  Eigen::VectorXd x = point;
  Eigen::MatrixXd incr = Eigen::MatrixXd::Zero(d, m + 1);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Eigen::VectorXd before = x;
    {
      const Eigen::VectorXd w = x + incr.col(0);
      x = w.cwiseMax(body.lower()).cwiseMin(body.upper());
      incr.col(0) = w - x;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::VectorXd w = x + incr.col(j + 1);
      const Eigen::VectorXd a = body.normals().row(j).transpose();
      const double excess = a.dot(w) - body.offsets()[j];
      x = excess > 0.0 ? Eigen::VectorXd(w - excess * a) : w;
      incr.col(j + 1) = w - x;
    }
    if ((x - before).squaredNorm() <= tol * tol * (1.0 + point.squaredNorm()) &&
        body.polytope_violation(x) <= 1e-12)
      break;
  }
  return x;
}

double distance_to_polytope(const ConvexBody& body, const Eigen::VectorXd& point) {
  return (project_onto_polytope(body, point) - point).norm();
}

std::optional<InscribedBall> chebyshev_center(const ConvexBody& body) {
  const Eigen::Index d = body.dimension();
  LinearProgram lp(d + 1);
  lp.lower.head(d) = body.lower();
  lp.upper.head(d) = body.upper();
  lp.lower[d] = 0.0;
  lp.upper[d] = 0.5 * (body.upper() - body.lower()).minCoeff();
  lp.objective[d] = 1.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(d + 1);
    row[k] = 1.0;
    row[d] = 1.0;
    lp.add(row, Sense::LessEqual, body.upper()[k]);
    row[k] = -1.0;
    lp.add(row, Sense::LessEqual, -body.lower()[k]);
  }
  for (Eigen::Index j = 0; j < body.halfspace_count(); ++j) {
    Eigen::VectorXd row(d + 1);
    row << body.normals().row(j).transpose(), 1.0;
    lp.add(row, Sense::LessEqual, body.offsets()[j]);
  }
  const LpResult res = solve_lp(lp, Goal::Maximize);
  if (!res.optimal()) return std::nullopt;
  return InscribedBall{res.point.head(d), res.point[d]};
}

bool membership(const ConvexBody& body, const Eigen::VectorXd& point) {
  if (point.size() != body.dimension()) throw InputError("point dimension mismatch");
  const double violation = body.polytope_violation(point);
  if (body.expansion() == 0.0 || violation <= 0.0) return violation <= 1e-9;
  // Every single constraint's violation is a lower bound on the distance.
  if (violation > body.expansion() + 1e-9) return false;
  return distance_to_polytope(body, point) <= body.expansion() + 1e-9;
}

Vertex box_corner(const ConvexBody& body) {
  const Eigen::Index d = body.dimension();
  Vertex v;
  v.point = body.upper();
  v.active.resize(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) v.active[static_cast<std::size_t>(k)] = k;
  v.basis_inverse = Eigen::MatrixXd::Identity(d, d);
  return v;
}

namespace {

SupportPoint active_set_walk(const ConvexBody& body, const Eigen::VectorXd& c, Vertex start) {
  const Eigen::Index d = body.dimension();
  const Eigen::Index ncon = body.constraint_count();
  if (c.size() != d) throw InputError("objective dimension mismatch");
  Vertex v = std::move(start);

  std::vector<char> is_active(static_cast<std::size_t>(ncon), 0);
  for (auto idx : v.active) is_active[static_cast<std::size_t>(idx)] = 1;

  const double cscale = std::max(c.lpNorm<Eigen::Infinity>(), 1e-300);
  const long max_pivots = 50 * (ncon + d) + 1000;
  Eigen::VectorXd dirs;
  Eigen::VectorXd slacks;
  long since_refactor = 0;

  for (long pivot = 0;; ++pivot) {
    if (pivot > max_pivots) throw SolverFailure("active-set simplex pivot budget exhausted");
    const Eigen::VectorXd lambda = v.basis_inverse.transpose() * c;

    // Bland: leave through the smallest-index active constraint whose
    // multiplier is negative.
    Eigen::Index leave_pos = -1;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (lambda[r] < -1e-12 * cscale &&
          (leave_pos < 0 || v.active[static_cast<std::size_t>(r)] <
                                v.active[static_cast<std::size_t>(leave_pos)]))
        leave_pos = r;
    }
    if (leave_pos < 0) break;

    const Eigen::VectorXd s = -v.basis_inverse.col(leave_pos);
    constraint_products(body, s, dirs);
    constraint_slacks(body, v.point, slacks);
    const double sscale = s.lpNorm<Eigen::Infinity>();

    double best = kInf;
    Eigen::Index enter = -1;
    for (Eigen::Index i = 0; i < ncon; ++i) {
      if (is_active[static_cast<std::size_t>(i)]) continue;
      const double as = dirs[i];
      if (as <= 1e-9 * sscale) continue;
      const double t = std::max(slacks[i], 0.0) / as;
      if (enter < 0 || t < best - 1e-13 * (1.0 + best)) {
        best = t;
        enter = i;
      }
    }
    if (enter < 0) throw SolverFailure("polytope LP unbounded; box bounds violated");

    v.point += best * s;
    const Eigen::Index leaving = v.active[static_cast<std::size_t>(leave_pos)];
    is_active[static_cast<std::size_t>(leaving)] = 0;
    is_active[static_cast<std::size_t>(enter)] = 1;
    v.active[static_cast<std::size_t>(leave_pos)] = enter;

    if (++since_refactor >= 32) {
      refactor(body, v);
      since_refactor = 0;
    } else {
      // Sherman-Morrison for replacing one row of the active matrix.
      const Eigen::VectorXd col = v.basis_inverse.col(leave_pos);
      const Eigen::VectorXd u = body.constraint_normal(enter) - body.constraint_normal(leaving);
      const Eigen::RowVectorXd ub = u.transpose() * v.basis_inverse;
      const double denom = 1.0 + ub[leave_pos];
      if (std::abs(denom) < 1e-14) {
        refactor(body, v);
        since_refactor = 0;
      } else {
        v.basis_inverse -= (col * ub) / denom;
      }
    }
  }
  if (since_refactor > 0) refactor(body, v);
  const double value = c.dot(v.point);
  return SupportPoint{value, std::move(v)};
}

// Vertex basis for a basic LP solution: tight constraints in order of
// slack, kept when they add a new direction.
Vertex vertex_at(const ConvexBody& body, const Eigen::VectorXd& point) {
  const Eigen::Index d = body.dimension();
  Eigen::VectorXd slacks;
  constraint_slacks(body, point, slacks);
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < slacks.size(); ++i)
    if (std::abs(slacks[i]) <= 1e-7 * (1.0 + std::abs(body.constraint_offset(i)))) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(slacks[a]) < std::abs(slacks[b]); });
  Vertex v;
  Eigen::MatrixXd q(d, d);  // orthonormal basis of the chosen normals
  Eigen::Index rank = 0;
  for (Eigen::Index idx : order) {
    if (rank == d) break;
    Eigen::VectorXd r = body.constraint_normal(idx);
    for (int pass = 0; pass < 2; ++pass) r -= q.leftCols(rank) * (q.leftCols(rank).transpose() * r);
    const double n = r.norm();
    if (n < 1e-6) continue;
    q.col(rank++) = r / n;
    v.active.push_back(idx);
  }
  if (rank < d) throw SolverFailure("active-set fallback: LP optimum is not a vertex");
  refactor(body, v);
  return v;
}

}  // namespace

SupportPoint maximize_from(const ConvexBody& body, const Eigen::VectorXd& c, Vertex start) {
  try {
    return active_set_walk(body, c, std::move(start));
  } catch (const SolverFailure&) {
    // Degenerate vertices can leave the walk's basis numerically singular;
    // solve with the tableau and rebuild a basis at its optimum.
    LinearProgram lp = body.to_linear_program();
    lp.objective = c;
    LpResult r = solve_lp(lp, Goal::Maximize);
    if (r.status == LpStatus::Infeasible) throw EmptyBodyError("support query on an empty body");
    if (r.status != LpStatus::Optimal) throw SolverFailure("support LP did not reach an optimum");
    Vertex v = vertex_at(body, r.point);
    return SupportPoint{c.dot(v.point), std::move(v)};
  }
}

std::optional<Vertex> find_vertex(const ConvexBody& body) {
  // Add the halfspaces one at a time: the minimizer of the new normal over
  // the previous polytope is a vertex of the restricted one, if it is feasible.
  ConvexBody partial(body.lower(), body.upper());
  Vertex v = box_corner(partial);
  for (Eigen::Index j = 0; j < body.halfspace_count(); ++j) {
    const Eigen::VectorXd a = body.normals().row(j).transpose();
    const double b = body.offsets()[j];
    if (a.dot(v.point) > b) {
      SupportPoint low = maximize_from(partial, -a, std::move(v));
      if (-low.value > b + 1e-9) return std::nullopt;
      v = std::move(low.vertex);
    }
    partial.add_halfspace(a, b);
  }
  return v;
}

SupportPoint maximize_polytope(const ConvexBody& body, const Eigen::VectorXd& c) {
  if (body.dimension() <= kActiveSetMaxDim) {
    auto v = find_vertex(body);
    if (!v) throw EmptyBodyError("support query on an empty body");
    return maximize_from(body, c, std::move(*v));
  }
  if (body.halfspace_count() == 0) {
    Eigen::VectorXd x(body.dimension());
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = c[k] >= 0.0 ? body.upper()[k] : body.lower()[k];
    return SupportPoint{c.dot(x), Vertex{std::move(x), {}, {}}};
  }
  LinearProgram lp = body.to_linear_program();
  lp.objective = c;
  LpResult r = solve_lp(lp, Goal::Maximize);
  if (r.status == LpStatus::Infeasible) throw EmptyBodyError("support query on an empty body");
  if (r.status != LpStatus::Optimal) throw SolverFailure("support LP did not reach an optimum");
  return SupportPoint{r.value, Vertex{std::move(r.point), {}, {}}};
}

double support(const ConvexBody& body, const Eigen::VectorXd& c) {
  return maximize_polytope(body, c).value + body.expansion() * c.norm();
}

}  // namespace nnpart
