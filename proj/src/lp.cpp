#include "nnpart/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nnpart/errors.hpp"

namespace nnpart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable is expressed through nonnegative internal columns.
enum class VarForm { Shift, Mirror, Split };

struct VarMap {
  VarForm form = VarForm::Shift;
  Eigen::Index column = 0;  // Split uses column and column + 1
  double anchor = 0.0;      // l for Shift, u for Mirror
};

class Tableau {
 public:
  Tableau(RowMatrix a, Eigen::VectorXd rhs, Eigen::VectorXd upper, std::vector<Eigen::Index> basis,
          const LpOptions& options)
      : t_(std::move(a)),
        beta_(std::move(rhs)),
        upper_(std::move(upper)),
        basis_(std::move(basis)),
        at_upper_(static_cast<std::size_t>(t_.cols()), false),
        is_basic_(static_cast<std::size_t>(t_.cols()), false),
        options_(options) {
    for (auto b : basis_) is_basic_[static_cast<std::size_t>(b)] = true;
    max_pivots_ = options.max_pivots > 0 ? options.max_pivots : 50 * (t_.rows() + t_.cols()) + 1000;
  }

  // Minimizes cost·x; returns false when unbounded.
  bool minimize(const Eigen::VectorXd& cost) {
    const Eigen::Index m = t_.rows();
    const Eigen::Index n = t_.cols();
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    reduced_ = cost.transpose() - cb.transpose() * t_;

    for (;;) {
      Eigen::Index q = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (is_basic_[ju]) continue;
        if (!at_upper_[ju] && reduced_[j] < -options_.pivot_tol && upper_[j] > 0.0) {
          q = j;
          break;
        }
        if (at_upper_[ju] && reduced_[j] > options_.pivot_tol) {
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      if (++pivots_ > max_pivots_) throw SolverFailure("simplex pivot budget exhausted");

      const double dir = at_upper_[static_cast<std::size_t>(q)] ? -1.0 : 1.0;
      double best = upper_[q];  // bound flip
      Eigen::Index row = -1;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double alpha = t_(i, q) * dir;
        double theta = kInf;
        if (alpha > options_.pivot_tol) {
          theta = std::max(beta_[i], 0.0) / alpha;
        } else if (alpha < -options_.pivot_tol) {
          const double ub = upper_[basis_[static_cast<std::size_t>(i)]];
          if (std::isfinite(ub)) theta = std::max(ub - beta_[i], 0.0) / (-alpha);
        }
        if (!std::isfinite(theta)) continue;
        const double slop = std::isfinite(best) ? 1e-12 * (1.0 + std::abs(best)) : 0.0;
        if (theta < best - slop) {
          best = theta;
          row = i;
        } else if (row >= 0 && theta <= best + slop &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(row)]) {
          row = i;
        }
      }
      if (!std::isfinite(best)) return false;

      for (Eigen::Index i = 0; i < m; ++i) beta_[i] -= t_(i, q) * dir * best;

      if (row < 0) {
        at_upper_[static_cast<std::size_t>(q)] = !at_upper_[static_cast<std::size_t>(q)];
        continue;
      }

      const Eigen::Index leaving = basis_[static_cast<std::size_t>(row)];
      const double alpha_row = t_(row, q) * dir;
      at_upper_[static_cast<std::size_t>(leaving)] = alpha_row < 0.0;
      is_basic_[static_cast<std::size_t>(leaving)] = false;
      const double entering_value = dir > 0 ? best : upper_[q] - best;

      const double piv = t_(row, q);
      if (std::abs(piv) < options_.pivot_tol) throw SolverFailure("simplex pivot below tolerance");
      t_.row(row) /= piv;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i == row) continue;
        const double f = t_(i, q);
        if (f != 0.0) t_.row(i) -= f * t_.row(row);
      }
      const double rq = reduced_[q];
      reduced_ -= rq * t_.row(row).transpose();
      basis_[static_cast<std::size_t>(row)] = q;
      is_basic_[static_cast<std::size_t>(q)] = true;
      at_upper_[static_cast<std::size_t>(q)] = false;
      beta_[row] = entering_value;
    }
  }

  Eigen::VectorXd values() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(t_.cols());
    for (Eigen::Index j = 0; j < t_.cols(); ++j)
      if (at_upper_[static_cast<std::size_t>(j)]) x[j] = upper_[j];
    for (Eigen::Index i = 0; i < t_.rows(); ++i) x[basis_[static_cast<std::size_t>(i)]] = beta_[i];
    return x;
  }

  void fix_columns(Eigen::Index from, Eigen::Index to) {
    for (Eigen::Index j = from; j < to; ++j) upper_[j] = 0.0;
  }

 private:
  RowMatrix t_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd upper_;
  Eigen::RowVectorXd reduced_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;
  LpOptions options_;
  long pivots_ = 0;
  long max_pivots_ = 0;
};

}  // namespace

LinearProgram::LinearProgram(Eigen::Index dim)
    : objective(Eigen::VectorXd::Zero(dim)),
      lower(Eigen::VectorXd::Constant(dim, -kInf)),
      upper(Eigen::VectorXd::Constant(dim, kInf)) {}

void LinearProgram::add(Eigen::VectorXd normal, Sense sense, double offset) {
  constraints.push_back({std::move(normal), offset, sense});
}

void LinearProgram::validate() const {
  const Eigen::Index n = objective.size();
  if (lower.size() != n || upper.size() != n)
    throw InputError("linear program: bound vectors do not match objective dimension");
  if (!objective.allFinite()) throw InputError("linear program: non-finite objective");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf)
      throw InputError("linear program: invalid bounds on variable " + std::to_string(j));
  }
  for (const auto& c : constraints) {
    if (c.normal.size() != n) throw InputError("linear program: constraint dimension mismatch");
    if (!c.normal.allFinite() || !std::isfinite(c.offset))
      throw InputError("linear program: non-finite constraint coefficient");
  }
}

double max_violation(const LinearProgram& lp, const Eigen::VectorXd& point) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    worst = std::max(worst, lp.lower[j] - point[j]);
    worst = std::max(worst, point[j] - lp.upper[j]);
  }
  for (const auto& c : lp.constraints) {
    const double lhs = c.normal.dot(point);
    switch (c.sense) {
      case Sense::LessEqual: worst = std::max(worst, lhs - c.offset); break;
      case Sense::GreaterEqual: worst = std::max(worst, c.offset - lhs); break;
      case Sense::Equal: worst = std::max(worst, std::abs(lhs - c.offset)); break;
    }
  }
  return worst;
}

LpResult solve_lp(const LinearProgram& lp, Goal goal, const LpOptions& options) {
  lp.validate();
  const Eigen::Index n = lp.dimension();

  std::vector<VarMap> maps(static_cast<std::size_t>(n));
  Eigen::Index ny = 0;
  std::vector<double> col_upper;
  for (Eigen::Index j = 0; j < n; ++j) {
    auto& vm = maps[static_cast<std::size_t>(j)];
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    vm.column = ny;
    if (std::isfinite(l)) {
      vm.form = VarForm::Shift;
      vm.anchor = l;
      col_upper.push_back(u - l);
      ny += 1;
    } else if (std::isfinite(u)) {
      vm.form = VarForm::Mirror;
      vm.anchor = u;
      col_upper.push_back(kInf);
      ny += 1;
    } else {
      vm.form = VarForm::Split;
      col_upper.push_back(kInf);
      col_upper.push_back(kInf);
      ny += 2;
    }
  }

  auto to_internal = [&](const Eigen::VectorXd& coeffs, double& constant) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(ny);
    constant = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& vm = maps[static_cast<std::size_t>(j)];
      const double a = coeffs[j];
      switch (vm.form) {
        case VarForm::Shift:
          row[vm.column] = a;
          constant += a * vm.anchor;
          break;
        case VarForm::Mirror:
          row[vm.column] = -a;
          constant += a * vm.anchor;
          break;
        case VarForm::Split:
          row[vm.column] = a;
          row[vm.column + 1] = -a;
          break;
      }
    }
    return row;
  };

  const Eigen::Index m = static_cast<Eigen::Index>(lp.constraints.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<Sense> senses;
  rows.reserve(static_cast<std::size_t>(m));
  Eigen::Index nslack = 0;
  Eigen::Index nart = 0;
  for (const auto& c : lp.constraints) {
    double constant = 0.0;
    Eigen::VectorXd row = to_internal(c.normal, constant);
    double b = c.offset - constant;
    Sense s = c.sense;
    if (b < 0.0) {
      row = -row;
      b = -b;
      if (s == Sense::LessEqual) s = Sense::GreaterEqual;
      else if (s == Sense::GreaterEqual) s = Sense::LessEqual;
    }
    if (s != Sense::Equal) ++nslack;
    if (s != Sense::LessEqual) ++nart;
    rows.push_back(std::move(row));
    rhs.push_back(b);
    senses.push_back(s);
  }

  const Eigen::Index ncol = ny + nslack + nart;
  RowMatrix a = RowMatrix::Zero(m, ncol);
  Eigen::VectorXd beta(m);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(ncol, kInf);
  for (Eigen::Index j = 0; j < ny; ++j) upper[j] = col_upper[static_cast<std::size_t>(j)];
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  Eigen::Index slack = ny;
  Eigen::Index art = ny + nslack;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    a.row(i).head(ny) = rows[iu].transpose();
    beta[i] = rhs[iu];
    switch (senses[iu]) {
      case Sense::LessEqual:
        a(i, slack) = 1.0;
        basis[iu] = slack++;
        break;
      case Sense::GreaterEqual:
        a(i, slack++) = -1.0;
        a(i, art) = 1.0;
        basis[iu] = art++;
        break;
      case Sense::Equal:
        a(i, art) = 1.0;
        basis[iu] = art++;
        break;
    }
  }

  Tableau tableau(std::move(a), beta, upper, std::move(basis), options);

  if (nart > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncol);
    phase1.tail(nart).setOnes();
    tableau.minimize(phase1);
    const double infeasibility = tableau.values().tail(nart).sum();
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, std::abs(b));
    if (infeasibility > options.feasibility_tol * scale) return LpResult{LpStatus::Infeasible, 0.0, {}};
    tableau.fix_columns(ny + nslack, ncol);
  }

  double constant = 0.0;
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncol);
  cost.head(ny) = to_internal(lp.objective, constant);
  if (goal == Goal::Maximize) cost = -cost;
  if (!tableau.minimize(cost)) return LpResult{LpStatus::Unbounded, 0.0, {}};

  const Eigen::VectorXd y = tableau.values();
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& vm = maps[static_cast<std::size_t>(j)];
    switch (vm.form) {
      case VarForm::Shift: x[j] = vm.anchor + y[vm.column]; break;
      case VarForm::Mirror: x[j] = vm.anchor - y[vm.column]; break;
      case VarForm::Split: x[j] = y[vm.column] - y[vm.column + 1]; break;
    }
    x[j] = std::clamp(x[j], lp.lower[j], lp.upper[j]);
  }
  return LpResult{LpStatus::Optimal, lp.objective.dot(x), std::move(x)};
}

}  // namespace nnpart
