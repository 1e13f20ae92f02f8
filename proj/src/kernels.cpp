#include "nnpart/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnpart/errors.hpp"

namespace nnpart {

namespace {

void require_in_ball(const Eigen::VectorXd& x, const char* what) {
  if (x.norm() > 1.0 + 1e-9) throw InputError(std::string(what) + " must lie in the unit ball");
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Eigen::VectorXd l2_lift_center(const Eigen::VectorXd& x) {
  require_in_ball(x, "center");
  Eigen::VectorXd t(x.size() + 1);
  t.head(x.size()) = x;
  t[x.size()] = x.squaredNorm();
  return t / std::sqrt(2.0);
}

Eigen::VectorXd l2_lift_query(const Eigen::VectorXd& q) {
  require_in_ball(q, "query");
  Eigen::VectorXd t(q.size() + 1);
  t.head(q.size()) = 2.0 * q;
  t[q.size()] = -1.0;
  return t / std::sqrt(5.0);
}

double falling_binomial(double p, int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= (p - j) / (j + 1);
  return c;
}

EvenPKernel::EvenPKernel(int p, Eigen::Index d) : p_(p), d_(d) {
  if (p < 2 || p % 2 != 0) throw InputError("even-p kernel needs an even p >= 2");
  if (d < 1) throw InputError("kernel dimension must be positive");
  // ‖H(z)‖² <= Σ_k C(p,k)² p^(-2(p-k)) / p on the unit ball.
  double s = 0.0;
  for (int k = 0; k <= p; ++k) {
    const double c = falling_binomial(p, k) * std::pow(static_cast<double>(p), -(p - k));
    s += c * c;
  }
  scale_ = std::min(1.0, 1.0 / std::sqrt(s / p));
}

Eigen::VectorXd EvenPKernel::lift_center(const Eigen::VectorXd& y) const {
  if (y.size() != d_) throw InputError("center dimension mismatch");
  require_in_ball(y, "center");
  const double norm = 1.0 / std::sqrt(static_cast<double>(p_) * static_cast<double>(d_));
  Eigen::VectorXd g(lifted_dimension());
  for (Eigen::Index j = 0; j < d_; ++j) {
    const double a = y[j] / p_;
    double pw = 1.0;
    for (int k = 0; k <= p_; ++k) {
      g[j * (p_ + 1) + k] = pw * norm;
      pw *= a;
    }
  }
  return g;
}

Eigen::VectorXd EvenPKernel::lift_query(const Eigen::VectorXd& z) const {
  if (z.size() != d_) throw InputError("query dimension mismatch");
  require_in_ball(z, "query");
  const double norm = 1.0 / std::sqrt(static_cast<double>(p_) * static_cast<double>(d_));
  Eigen::VectorXd h(lifted_dimension());
  for (Eigen::Index j = 0; j < d_; ++j) {
    const double a = -z[j] / p_;
    for (int k = 0; k <= p_; ++k)
      h[j * (p_ + 1) + k] = falling_binomial(p_, k) * std::pow(a, p_ - k) * norm;
  }
  return h;
}

double EvenPKernel::bound_to_original(double L) const {
  const double p = p_;
  return std::pow(p, (p + 1.0) / p) * std::pow(static_cast<double>(d_) / scale_, 1.0 / p) * L;
}

GeneralPKernel::GeneralPKernel(double p, Eigen::Index d, int i, double c_scale)
    : p_(p), pp_(static_cast<int>(std::floor(p)) + 1), d_(d), i_(i) {
  if (!(p > 2.0)) throw ConfigError("general-p kernel needs p > 2");
  if (d < 1) throw ConfigError("kernel dimension must be positive");
  if (i < 1) throw ConfigError("kernel scale index starts at 1");
  if (!(c_scale > 0.0)) throw ConfigError("c_scale must be positive");
  const double dd = static_cast<double>(d);
  const double half = c_scale * dd * dd * pp_ * std::ldexp(1.0, i - 1);  // D_i = 1/(2δ_i)
  groups_ = std::lround(half);
  if (groups_ < 1 || std::abs(half - static_cast<double>(groups_)) > 1e-9 * half)
    throw ConfigError("c_scale must make D_i a positive integer");
  delta_ = 0.5 / static_cast<double>(groups_);
  if (p_ * delta_ > 1.0) throw ConfigError("general-p kernel needs p·δ_i <= 1");
}

double GeneralPKernel::error_bound() const {
  return static_cast<double>(d_) * std::pow(p_ * delta_, p_);
}

long GeneralPKernel::group_of(double x) const {
  long c = static_cast<long>(std::floor(x / delta_));
  if (c * delta_ > x) --c;
  else if ((c + 1) * delta_ <= x) ++c;
  return std::clamp(c, -groups_, groups_);
}

Eigen::VectorXd power_block(double x, double p) {
  const int top = static_cast<int>(std::floor(p));
  Eigen::VectorXd b(top + 1);
  const double s = sign_of(x);
  const double ax = std::abs(x);
  for (int k = 0; k <= top; ++k) b[k] = (k == 0 ? 1.0 : std::pow(s, k)) * std::pow(ax, p - k);
  return b;
}

Eigen::VectorXd GeneralPKernel::lift_center(const Eigen::VectorXd& y) const {
  if (y.size() != d_) throw InputError("center dimension mismatch");
  require_in_ball(y, "center");
  Eigen::VectorXd g(lifted_dimension());
  for (Eigen::Index j = 0; j < d_; ++j) {
    const double x = 0.5 * y[j];
    for (long c = -groups_; c <= groups_; ++c)
      g.segment(j * block() + (c + groups_) * pp_, pp_) = power_block(x - c * delta_, p_);
  }
  return g;
}

Eigen::SparseVector<double> GeneralPKernel::lift_query(const Eigen::VectorXd& z) const {
  if (z.size() != d_) throw InputError("query dimension mismatch");
  require_in_ball(z, "query");
  Eigen::SparseVector<double> h(lifted_dimension());
  h.reserve(d_ * pp_);
  for (Eigen::Index j = 0; j < d_; ++j) {
    const double x = 0.5 * z[j];
    const long c = group_of(x);
    // Expansion point x' = y/2 - cδ and target y/2 - x differ by cδ - x.
    const double t = c * delta_ - x;
    const Eigen::Index base = j * block() + (c + groups_) * pp_;
    double pw = 1.0;
    for (int k = 0; k < pp_; ++k) {
      h.insert(base + k) = falling_binomial(p_, k) * pw;
      pw *= t;
    }
  }
  return h;
}

double taylor_sum(double p, double x, double xp) {
  const int top = static_cast<int>(std::floor(p));
  const Eigen::VectorXd b = power_block(xp, p);
  double sum = 0.0;
  double pw = 1.0;
  for (int k = 0; k <= top; ++k) {
    sum += falling_binomial(p, k) * pw * b[k];
    pw *= (x - xp);
  }
  return sum;
}

bool taylor_remainder_check(double p, double x, double xp) {
  const double lhs = std::abs(std::pow(std::abs(x), p) - taylor_sum(p, x, xp));
  return lhs <= std::pow(p * std::abs(x - xp), p) + 1e-12;
}

double pnorm_pow(const Eigen::VectorXd& v, double p) {
  return v.cwiseAbs().array().pow(p).sum();
}

}  // namespace nnpart
