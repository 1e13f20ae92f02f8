#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace nnpart {

// Euclidean lift: ⟨T(x), Q(q)⟩ = (‖q‖² - ‖q - x‖²)/√10, so the nearest
// center in L² has the largest inner product.
Eigen::VectorXd l2_lift_center(const Eigen::VectorXd& x);
Eigen::VectorXd l2_lift_query(const Eigen::VectorXd& q);

/// A loss bound L of the inner-product learner (run with α = 1/2) in L² units.
inline double l2_bound_to_original(double L) { return 2.0 * L; }

/// Exact polynomial lift for even p: ⟨G(y), H(z)⟩ = ‖(y - z)/p‖_p^p / (pd).
class EvenPKernel {
 public:
  EvenPKernel(int p, Eigen::Index d);

  int p() const { return p_; }
  Eigen::Index d() const { return d_; }
  Eigen::Index lifted_dimension() const { return static_cast<Eigen::Index>(p_ + 1) * d_; }

  Eigen::VectorXd lift_center(const Eigen::VectorXd& y) const;
  Eigen::VectorXd lift_query(const Eigen::VectorXd& z) const;

  /// Factor s <= 1 with ‖s·H(z)‖ <= 1 on the unit ball.
  double query_scale() const { return scale_; }
  /// -s·H(z): first center nearer iff ⟨learner_query, G(x1) - G(x2)⟩ >= 0.
  Eigen::VectorXd learner_query(const Eigen::VectorXd& z) const { return -scale_ * lift_query(z); }
  /// L^p bound from a learner bound L obtained with α = 1/p.
  double bound_to_original(double L) const;

 private:
  int p_;
  Eigen::Index d_;
  double scale_;
};

/// Scale-i Taylor-block lift for real p > 2.
class GeneralPKernel {
 public:
  GeneralPKernel(double p, Eigen::Index d, int i, double c_scale = 100.0);

  double p() const { return p_; }
  int p_prime() const { return pp_; }
  Eigen::Index d() const { return d_; }
  int scale() const { return i_; }
  double delta() const { return delta_; }
  long half_groups() const { return groups_; }  // D_i
  Eigen::Index block() const { return static_cast<Eigen::Index>(pp_) * (2 * groups_ + 1); }
  Eigen::Index lifted_dimension() const { return d_ * block(); }
  /// d·(pδ)^p, the approximation error of ⟨G, H⟩.
  double error_bound() const;

  Eigen::VectorXd lift_center(const Eigen::VectorXd& y) const;
  Eigen::SparseVector<double> lift_query(const Eigen::VectorXd& z) const;
  /// Group label c with cδ <= x < (c+1)δ, clamped to [-D, D].
  long group_of(double x) const;

 private:
  double p_;
  int pp_;
  Eigen::Index d_;
  int i_;
  double delta_;
  long groups_;
};

/// (|x|^p, sign(x)|x|^(p-1), ..., sign(x)^⌊p⌋ |x|^(p-⌊p⌋)) with sign(0) = 0.
Eigen::VectorXd power_block(double x, double p);

/// p(p-1)...(p-k+1)/k!
double falling_binomial(double p, int k);

/// Σ_{k<=⌊p⌋} falling_binomial(p,k) (x - x')^k sign(x')^k |x'|^(p-k).
double taylor_sum(double p, double x, double xp);

/// |x|^p within (p|x - x'|)^p + 1e-12 of its Taylor sum around x'.
bool taylor_remainder_check(double p, double x, double xp);

/// ‖v‖_p^p
double pnorm_pow(const Eigen::VectorXd& v, double p);

}  // namespace nnpart
