#include "nnpart/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nnpart/errors.hpp"
#include "nnpart/kernels.hpp"

namespace nnpart {

Metric parse_metric(const std::string& name) {
  if (name == "inner_product") return Metric::InnerProduct;
  if (name == "l2") return Metric::L2;
  if (name == "lp") return Metric::Lp;
  throw ConfigError("unknown metric '" + name + "'");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::InnerProduct: return "inner_product";
    case Metric::L2: return "l2";
    case Metric::Lp: return "lp";
  }
  return "?";
}

Environment::Environment(Metric metric, std::vector<Eigen::VectorXd> centers, double p, double alpha)
    : metric_(metric), centers_(std::move(centers)), p_(p), alpha_(alpha) {
  if (centers_.size() < 2) throw ConfigError("environment needs at least two centers");
  for (const auto& c : centers_) {
    if (c.size() != centers_.front().size() || c.size() == 0) throw ConfigError("centers must share a dimension");
    if (c.norm() > 1.0 + 1e-9) throw ConfigError("centers must lie in the unit ball");
  }
  if (metric_ == Metric::Lp && !(p_ >= 2.0)) throw ConfigError("lp metric needs p >= 2");
  if (!(alpha_ > 0.0)) throw ConfigError("loss exponent must be positive");
}

double Environment::similarity(const Eigen::VectorXd& q, int i) const {
  const Eigen::VectorXd& x = centers_.at(static_cast<std::size_t>(i));
  if (q.size() != x.size()) throw InputError("query dimension mismatch");
  switch (metric_) {
    case Metric::InnerProduct: return -q.dot(x);
    case Metric::L2: return (q - x).norm();
    case Metric::Lp: return std::pow(pnorm_pow(q - x, p_), 1.0 / p_);
  }
  return 0.0;
}

int Environment::truth(const Eigen::VectorXd& q) const {
  int best = 0;
  double bv = similarity(q, 0);
  for (int i = 1; i < labels(); ++i) {
    const double v = similarity(q, i);
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

double Environment::exact_loss(const Eigen::VectorXd& q, int guess) const {
  if (guess < 0 || guess >= labels()) throw InputError("guess out of range");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < labels(); ++i) best = std::min(best, similarity(q, i));
  const double gap = similarity(q, guess) - best;
  return gap > 0.0 ? std::pow(gap, alpha_) : 0.0;
}

double Environment::margin(const Eigen::VectorXd& q) const {
  std::vector<double> v;
  for (int i = 0; i < labels(); ++i) v.push_back(similarity(q, i));
  std::partial_sort(v.begin(), v.begin() + 2, v.end());
  return v[1] - v[0];
}

double Environment::separation() const {
  const double p = metric_ == Metric::Lp ? p_ : 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers_.size(); ++i)
    for (std::size_t j = i + 1; j < centers_.size(); ++j)
      best = std::min(best, std::pow(pnorm_pow(centers_[i] - centers_[j], p), 1.0 / p));
  return best;
}

std::vector<Eigen::VectorXd> random_centers(int k, Eigen::Index d, std::uint64_t seed, double min_sep, double p) {
  if (k < 2 || d < 1) throw ConfigError("random centers need k >= 2 and d >= 1");
  Rng rng(seed);
  for (long attempt = 0; attempt < 100000; ++attempt) {
    std::vector<Eigen::VectorXd> c;
    for (int i = 0; i < k; ++i) c.push_back(random_in_ball(rng, d));
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = i + 1; j < k && ok; ++j)
        ok = std::pow(pnorm_pow(c[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(j)], p), 1.0 / p) >=
             min_sep;
    if (ok) return c;
  }
  throw GenerationError("could not draw centers with the requested separation");
}

std::vector<Eigen::VectorXd> margin_stream(const Environment& env, double gamma, long T, std::uint64_t seed) {
  if (gamma < 0.0) throw ConfigError("margin must be nonnegative");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(std::max(T, 0L)));
  for (long t = 0; t < T; ++t) {
    bool found = false;
    for (long tries = 0; tries < 1000000; ++tries) {
      Eigen::VectorXd q = random_in_ball(rng, env.dimension());
      if (env.margin(q) >= gamma) {
        out.push_back(std::move(q));
        found = true;
        break;
      }
    }
    if (!found) throw GenerationError("margin stream: no query reached the requested margin");
  }
  return out;
}

std::vector<Eigen::VectorXd> read_replay(const std::string& path, Eigen::Index d) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open replay file '" + path + "'");
  std::vector<Eigen::VectorXd> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    if (!ss.eof()) throw ConfigError("replay line " + std::to_string(lineno) + ": not a number");
    if (vals.empty()) continue;
    if (static_cast<Eigen::Index>(vals.size()) != d)
      throw ConfigError("replay line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " values");
    out.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(), d));
  }
  return out;
}

}  // namespace nnpart
