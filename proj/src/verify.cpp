#include "nnpart/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "nnpart/errors.hpp"
#include "nnpart/kernels.hpp"
#include "nnpart/multiclass.hpp"
#include "nnpart/pairwise.hpp"
#include "nnpart/rng.hpp"
#include "nnpart/sampling.hpp"

namespace nnpart {

namespace {

CheckResult at_most(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, measured <= bound};
}

std::string label(const char* fmt, double a, double b, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

}  // namespace

std::vector<CheckResult> verify_kernels(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(derive_seed(seed, 11));
  for (int p : {2, 4}) {
    for (Eigen::Index d : {1, 3}) {
      const EvenPKernel ker(p, d);
      double worst = 0.0;
      for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd y = random_in_ball(rng, d);
        const Eigen::VectorXd z = random_in_ball(rng, d);
        const double exact = pnorm_pow((y - z) / p, p) / (p * static_cast<double>(d));
        worst = std::max(worst, std::abs(ker.lift_center(y).dot(ker.lift_query(z)) - exact));
      }
      out.push_back(at_most(label("even_p_exact p=%g d=%g", p, static_cast<double>(d)), worst, 1e-9));
    }
  }
  for (double p : {2.5, 3.5}) {
    for (Eigen::Index d : {1, 2}) {
      for (int i : {1, 2}) {
        const GeneralPKernel ker(p, d, i);
        double worst = 0.0;  // error / bound
        for (int t = 0; t < 1000; ++t) {
          const Eigen::VectorXd y = random_in_ball(rng, d);
          const Eigen::VectorXd z = random_in_ball(rng, d);
          const double target = pnorm_pow(0.5 * (y - z), p);
          worst = std::max(worst, std::abs(ker.lift_query(z).dot(ker.lift_center(y)) - target) / ker.error_bound());
        }
        out.push_back(at_most(label("general_p_error_ratio p=%g d=%g i=%g", p, static_cast<double>(d), i), worst, 1.0));
      }
    }
  }
  long bad = 0;
  std::uniform_real_distribution<double> pd(2.0, 6.0);
  for (long t = 0; t < 100000; ++t) {
    const double p = pd(rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double xp = 2.0 * uniform01(rng) - 1.0;
    if (!taylor_remainder_check(p, x, xp)) ++bad;
  }
  out.push_back(at_most("taylor_remainder_failures", static_cast<double>(bad), 0.0));
  return out;
}

std::vector<CheckResult> verify_lp(long trials, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 12));
  long failures = 0;
  double worst = 0.0;
  for (long t = 0; t < trials; ++t) {
    const int k = 2 + static_cast<int>(rng() % 7);
    // Skew-symmetric part plus a nonnegative symmetric part.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) A(i, j) = 2.0 * uniform01(rng) - 1.0;
    Eigen::MatrixXd M = A - A.transpose();
    if (rng() % 2) {
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
          const double s = uniform01(rng) < 0.3 ? uniform01(rng) : 0.0;
          M(i, j) += s;
          if (i != j) M(j, i) += s;
        }
    }
    try {
      const Eigen::VectorXd v = choose_distribution(M);
      const double mv = (M * v).minCoeff();
      const bool ok = mv >= -1e-9 && std::abs(v.sum() - 1.0) <= 1e-9 && v.minCoeff() >= 0.0;
      worst = std::min(worst, mv);
      if (!ok) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {at_most("distribution_lp_failures", static_cast<double>(failures), 0.0),
          {"distribution_lp_min_Mv", worst, -1e-9, worst >= -1e-9}};
}

MultiscaleOptions desk_multiscale_options(double separation) {
  MultiscaleOptions opt;
  opt.p = 2.5;
  opt.d = 1;
  opt.separation = separation;
  opt.c_scale = 1.0;
  opt.selection_constant = 1.0;
  opt.sampling = {512, 64};
  return opt;
}

ContainmentStats containment_run(const MultiscaleOptions& opt, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                 long rounds, std::uint64_t seed) {
  MultiscaleLearner learner(opt, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  ContainmentStats st;
  for (long t = 0; t < rounds; ++t) {
    Eigen::VectorXd q(opt.d);
    for (Eigen::Index c = 0; c < opt.d; ++c) q[c] = 2.0 * uniform01(rng) - 1.0;
    const Side guess = learner.predict(q);
    const Side truth = pnorm_pow(q - x1, opt.p) <= pnorm_pow(q - x2, opt.p) ? Side::First : Side::Second;
    learner.observe(q, guess, truth);
    const double v = learner.truth_violation(x1, x2);
    st.worst = std::max(st.worst, v);
    if (v > 1e-9) ++st.violations;
    ++st.rounds;
  }
  st.scales = static_cast<int>(learner.scales().size());
  return st;
}

std::vector<CheckResult> verify_containment(long rounds, std::uint64_t seed) {
  const MultiscaleOptions opt = desk_multiscale_options(0.5);
  Eigen::VectorXd x1(1), x2(1);
  x1 << -0.3;
  x2 << 0.4;
  const ContainmentStats st = containment_run(opt, x1, x2, rounds, seed);
  return {at_most("containment_violating_rounds", static_cast<double>(st.violations), 0.0),
          at_most("containment_worst_violation", st.worst, 1e-9)};
}

std::vector<VolumeSample> volume_ratios(long mistakes, std::size_t samples, std::uint64_t seed) {
  std::vector<VolumeSample> out;
  const Eigen::Index d = 2;
  for (std::uint64_t run = 0; static_cast<long>(out.size()) < mistakes; ++run) {
    if (run > 1000) throw InvariantViolation("volume check: too few mistakes");
    const ScaleSchedule schedule = ScaleSchedule::for_horizon(d, 1.0, 2000);
    PairwiseLearner learner(schedule, {2048, 128}, derive_seed(seed, 21, run));
    Rng rng(derive_seed(seed, 22, run));
    Eigen::VectorXd x1 = random_in_ball(rng, d), x2 = random_in_ball(rng, d);
    const Eigen::VectorXd w = x1 - x2;
    for (int t = 0; t < 2000 && static_cast<long>(out.size()) < mistakes; ++t) {
      const Eigen::VectorXd q = random_in_ball(rng, d);
      const Side guess = learner.predict(q);
      const Side truth = q.dot(w) >= 0.0 ? Side::First : Side::Second;
      if (guess == truth) {
        learner.observe(q, guess, truth);
        continue;
      }
      const int i = learner.last_scale();
      const double z = schedule.z(i);
      const ConvexBody before = learner.search().knowledge().body().expanded(z);
      learner.observe(q, guess, truth);
      const ConvexBody after = learner.search().knowledge().body().expanded(z);
      const Estimate e = estimate_volume_ratio(before, after, samples, derive_seed(seed, 23, run, t));
      out.push_back({e.value, e.std_error, i});
    }
  }
  return out;
}

std::vector<CheckResult> verify_volume(long mistakes, std::size_t samples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto ratios = volume_ratios(mistakes, samples, seed);
  for (std::size_t m = 0; m < ratios.size(); ++m) {
    const auto& r = ratios[m];
    out.push_back(at_most(label("volume_ratio mistake=%g index=%g", static_cast<double>(m + 1), r.index), r.ratio,
                          0.75 + 3.0 * r.std_error));
  }
  return out;
}

bool report(std::ostream& out, const std::vector<CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " measured=%.6g bound=%.6g", c.measured, c.bound);
    out << (c.pass ? "PASS " : "FAIL ") << c.name << buf << "\n";
    all = all && c.pass;
  }
  return all;
}

int cmd_verify(const std::string& suite) {
  try {
    std::vector<CheckResult> checks;
    if (suite == "kernels") checks = verify_kernels();
    else if (suite == "lp") checks = verify_lp();
    else if (suite == "containment") checks = verify_containment();
    else if (suite == "volume") checks = verify_volume();
    else {
      std::cerr << "unknown suite '" << suite << "' (kernels, lp, containment, volume)\n";
      return 2;
    }
    return report(std::cout, checks) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "FAIL " << suite << " error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nnpart
