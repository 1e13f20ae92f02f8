#include "nnpart/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnpart/errors.hpp"
#include "nnpart/rng.hpp"
#include "nnpart/sampling.hpp"

namespace nnpart {

void MultiscaleOptions::validate() const {
  if (!(p > 2.0)) throw ConfigError("multiscale learner needs p > 2");
  if (d < 1) throw ConfigError("dimension must be positive");
  if (!(separation >= 0.0)) throw ConfigError("separation must be nonnegative");
  if (!(selection_constant > 0.0)) throw ConfigError("selection constant must be positive");
  if (!(slack_constant > 2.0)) throw ConfigError("slack constant must exceed 2 to cover the kernel error");
  if (i_cap < 0) throw ConfigError("i_cap must be nonnegative");
  if (sampling.samples == 0) throw ConfigError("multiscale sampling needs samples");
  GeneralPKernel(p, d, 1, c_scale);  // validates c_scale and p·δ_1
}

ScaleSet::ScaleSet(const GeneralPKernel& k)
    : kernel(k), set(Eigen::VectorXd::Constant(2 * k.lifted_dimension(), -1.0),
                     Eigen::VectorXd::Constant(2 * k.lifted_dimension(), 1.0)) {}

MultiscaleLearner::MultiscaleLearner(MultiscaleOptions options, std::uint64_t seed)
    : opt_(options), seed_(seed) {
  opt_.validate();
  if (opt_.i_cap > 0) {
    i_cap_ = opt_.i_cap;
  } else {
    i_cap_ = 1;
    while (2 * GeneralPKernel(opt_.p, opt_.d, i_cap_ + 1, opt_.c_scale).lifted_dimension() <=
           opt_.max_lifted_dim)
      ++i_cap_;
  }
  for (int i = 1; i <= i_cap_; ++i) kernels_.emplace_back(opt_.p, opt_.d, i, opt_.c_scale);
}

const GeneralPKernel& MultiscaleLearner::kernel(int i) const {
  if (i < 1 || i > i_cap_) throw InputError("scale index outside [1, i_cap]");
  return kernels_[static_cast<std::size_t>(i - 1)];
}

double MultiscaleLearner::threshold(int i) const {
  const GeneralPKernel& k = kernel(i);
  const double dd = static_cast<double>(opt_.d);
  return opt_.selection_constant * static_cast<double>(k.half_groups()) * opt_.p * dd * dd *
         std::pow(opt_.p * k.delta(), opt_.p);
}

double MultiscaleLearner::slack(int i) const {
  return opt_.slack_constant * kernel(i).error_bound();
}

Eigen::VectorXd MultiscaleLearner::round_direction(int i, const Eigen::VectorXd& q) const {
  const GeneralPKernel& k = kernel(i);
  const Eigen::VectorXd h = Eigen::VectorXd(k.lift_query(q));
  Eigen::VectorXd v(2 * h.size());
  v.head(h.size()) = -h;
  v.tail(h.size()) = h;
  return v;
}

ScaleSet& MultiscaleLearner::scale_set(int i) {
  auto it = scales_.find(i);
  if (it == scales_.end()) it = scales_.emplace(i, ScaleSet(kernel(i))).first;
  return it->second;
}

Interval MultiscaleLearner::support_at(int i, const Eigen::VectorXd& v) const {
  auto it = scales_.find(i);
  if (it != scales_.end()) return it->second.set.support_interval(v);
  const double r = v.lpNorm<1>();  // untouched [-1, 1]^m
  return Interval{-r, r};
}

MultiscaleLearner::Proposal& MultiscaleLearner::prepare(const Eigen::VectorXd& q) {
  if (q.size() != opt_.d) throw InputError("query dimension mismatch");
  if (cache_ && cache_->query == q) return *cache_;
  Proposal prop;
  prop.query = q;
  double bound = 2.0;
  const bool separated = opt_.separation > 0.0;
  for (int i = 1; i <= i_cap_; ++i) {
    Eigen::VectorXd v = round_direction(i, q);
    const Interval s = support_at(i, v);
    if (separated) {
      // Origin and lifted truth both lie in S_i, so |v·truth| <= max(hi, -lo).
      const double reach = std::max(s.hi, -s.lo) + 2.0 * kernel(i).error_bound();
      const double b = std::pow(2.0, opt_.p) * reach / std::pow(0.5 * opt_.separation, opt_.p - 1.0);
      bound = std::min(bound, b);
    }
    if (s.width() >= threshold(i)) {
      prop.scale = i;
      prop.direction = std::move(v);
      prop.support = s;
      break;
    }
  }
  prop.bound = bound;
  cache_ = std::move(prop);
  return *cache_;
}

int MultiscaleLearner::select_scale(const Eigen::VectorXd& q) { return prepare(q).scale; }

Side MultiscaleLearner::predict(const Eigen::VectorXd& q) {
  Proposal& prop = prepare(q);
  if (prop.predicted) return prop.side;
  prop.fraction = std::numeric_limits<double>::quiet_NaN();
  if (prop.scale == kBeyondCap || prop.support.lo >= 0.0) {
    prop.side = Side::First;
  } else if (prop.support.hi <= 0.0) {
    prop.side = Side::Second;
  } else {
    const ScaleSet& s = scale_set(prop.scale);
    std::size_t pos = 0;
    std::size_t neg = 0;
    const Eigen::VectorXd& v = prop.direction;
    // The origin stays strictly inside every S_i: each cut keeps a positive
    // slack. Thinning keeps consecutive recorded points roughly independent.
    const std::size_t thin = static_cast<std::size_t>((s.dimension() + 7) / 8);
    std::size_t step = 0;
    hit_and_run_walk(s.set.body(), Eigen::VectorXd::Zero(s.dimension()), opt_.sampling.samples * thin,
                     opt_.sampling.burn_in, derive_seed(seed_, ++nonce_), [&](const Eigen::VectorXd& z) {
                       if (++step % thin != 0) return;
                       const double x = v.dot(z);
                       if (x > 0.0) ++pos;
                       else if (x < 0.0) ++neg;
                     });
    const double n = static_cast<double>(pos + neg);
    prop.fraction = n > 0.0 ? static_cast<double>(pos) / n : 0.5;
    const double sigma = n > 0.0 ? 0.5 / std::sqrt(n) : 0.0;
    prop.side = prop.fraction >= 0.5 - 2.0 * sigma ? Side::First : Side::Second;
  }
  prop.predicted = true;
  return prop.side;
}

void MultiscaleLearner::observe(const Eigen::VectorXd& q, Side predicted, Side truth) {
  const Side mine = predict(q);
  if (predicted != mine) throw InputError("observe: prediction does not match this learner's proposal");
  const Proposal prop = *cache_;
  if (prop.scale == kBeyondCap) return;
  ScaleSet& s = scale_set(prop.scale);
  const double e = slack(prop.scale);
  if (truth == Side::First) s.set.cut(prop.direction, -e, Sense::GreaterEqual);
  else s.set.cut(prop.direction, e, Sense::LessEqual);
  ++updates_;
  cache_.reset();
}

double MultiscaleLearner::loss_bound(const Eigen::VectorXd& q) {
  if (!(opt_.separation > 0.0)) throw ConfigError("multiscale loss bound needs a separation Δ > 0");
  return prepare(q).bound;
}

std::unique_ptr<TwoCenterLearner> MultiscaleLearner::clone() const {
  return std::make_unique<MultiscaleLearner>(*this);
}

Eigen::VectorXd MultiscaleLearner::lifted_truth(int i, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const {
  const GeneralPKernel& k = kernel(i);
  Eigen::VectorXd z(2 * k.lifted_dimension());
  z.head(k.lifted_dimension()) = k.lift_center(x1);
  z.tail(k.lifted_dimension()) = k.lift_center(x2);
  return z;
}

double MultiscaleLearner::truth_violation(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const {
  double worst = 0.0;
  for (const auto& [i, s] : scales_)
    worst = std::max(worst, s.set.body().polytope_violation(lifted_truth(i, x1, x2)));
  return worst;
}

double MultiscaleLearner::last_fraction() const {
  return cache_ && cache_->predicted ? cache_->fraction : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace nnpart
