// One PASS/FAIL line per acceptance criterion. argv[1] is the nnpart binary.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "nnpart/config.hpp"
#include "nnpart/episode.hpp"
#include "nnpart/experiment.hpp"
#include "nnpart/kernels.hpp"
#include "nnpart/multiclass.hpp"
#include "nnpart/rng.hpp"
#include "nnpart/verify.hpp"

namespace fs = std::filesystem;
using namespace nnpart;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig config_from(const std::vector<std::pair<std::string, std::string>>& kv) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : kv) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

// Σ_{i ≤ ⌊p⌋} p(p-1)…(p-i+1)/i! (x - x')^i sign(x')^i |x'|^(p-i)
double taylor(double p, double x, double xp) {
  const double s = xp > 0.0 ? 1.0 : (xp < 0.0 ? -1.0 : 0.0);
  double coef = 1.0;
  double sum = 0.0;
  for (int i = 0; i <= static_cast<int>(std::floor(p)); ++i) {
    if (i > 0) coef *= (p - (i - 1)) / i;
    const double sign = i == 0 ? 1.0 : std::pow(s, i);
    sum += coef * std::pow(x - xp, i) * sign * std::pow(std::abs(xp), p - i);
  }
  return sum;
}

Outcome even_p_exactness() {
  Rng rng(101);
  double worst = 0.0;
  for (int p : {2, 4}) {
    for (Eigen::Index d : {1, 3}) {
      const EvenPKernel ker(p, d);
      for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd y = random_in_ball(rng, d);
        const Eigen::VectorXd z = random_in_ball(rng, d);
        double norm = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) norm += std::pow((y[c] - z[c]) / p, p);
        const double target = norm / (p * static_cast<double>(d));
        worst = std::max(worst, std::abs(ker.lift_center(y).dot(ker.lift_query(z)) - target));
      }
    }
  }
  return {worst <= 1e-9, fmt("max_error=%.3g tol=1e-9", worst)};
}

Outcome general_p_bound() {
  Rng rng(102);
  long violations = 0;
  long pairs = 0;
  double worst = 0.0;
  bool constants = true;
  for (double p : {2.5, 3.5}) {
    for (Eigen::Index d : {1, 2}) {
      for (int i : {1, 2}) {
        const GeneralPKernel ker(p, d, i);
        const double pp = std::floor(p) + 1.0;
        const double delta = 1.0 / (100.0 * d * d * pp * std::pow(2.0, i));
        constants = constants && ker.p_prime() == static_cast<int>(pp) && std::abs(ker.delta() - delta) <= 1e-15;
        const double bound = d * std::pow(p * delta, p);
        for (int t = 0; t < 1000; ++t, ++pairs) {
          const Eigen::VectorXd y = random_in_ball(rng, d);
          const Eigen::VectorXd z = random_in_ball(rng, d);
          double target = 0.0;
          for (Eigen::Index c = 0; c < d; ++c) target += std::pow(std::abs(0.5 * (y[c] - z[c])), p);
          const double err = std::abs(ker.lift_query(z).dot(ker.lift_center(y)) - target);
          worst = std::max(worst, err / bound);
          if (err > bound) ++violations;
        }
      }
    }
  }
  return {constants && violations == 0,
          fmt("pairs=%ld violations=%ld max_error/bound=%.3g constants=%s", pairs, violations, worst,
              constants ? "ok" : "mismatch")};
}

Outcome taylor_remainder() {
  Rng rng(103);
  long bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < 100000; ++t) {
    const double p = 2.0 + 4.0 * uniform01(rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double xp = 2.0 * uniform01(rng) - 1.0;
    const double lhs = std::abs(std::pow(std::abs(x), p) - taylor(p, x, xp));
    const double rhs = std::pow(p * std::abs(x - xp), p);
    worst = std::max(worst, lhs - rhs);
    if (lhs > rhs + 1e-12) ++bad;
    if (taylor_remainder_check(p, x, xp) != (lhs <= rhs + 1e-12)) ++bad;
  }
  return {bad == 0, fmt("triples=100000 failures=%ld max(lhs-rhs)=%.3g tol=1e-12", bad, worst)};
}

Outcome distribution_lp() {
  Rng rng(104);
  long failures = 0;
  double worst = 0.0;
  for (long t = 0; t < 10000; ++t) {
    const int k = 2 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd M(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) M(i, j) = 2.0 * uniform01(rng) - 1.0;
    // Mirror the lower triangle so M + Mᵀ >= 0, with a few strictly positive pairs.
    for (int i = 0; i < k; ++i) {
      M(i, i) = std::abs(M(i, i)) * (t % 3 == 0);
      for (int j = 0; j < i; ++j) M(i, j) = -M(j, i) + (uniform01(rng) < 0.2 ? uniform01(rng) : 0.0);
    }
    try {
      const Eigen::VectorXd v = choose_distribution(M);
      const double mv = (M * v).minCoeff();
      worst = std::min(worst, mv);
      if (mv < -1e-9 || std::abs(v.sum() - 1.0) > 1e-9 || v.minCoeff() < 0.0) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {failures == 0, fmt("matrices=10000 failures=%ld min(Mv)=%.3g tol=-1e-9", failures, worst)};
}

Outcome domination() {
  long episodes = 0, mistakes = 0, violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k : {2, 4}) {
    for (int d : {2, 3}) {
      const ExperimentConfig cfg = config_from({{"labels", std::to_string(k)},
                                                {"dimension", std::to_string(d)},
                                                {"rounds", "10000"},
                                                {"seed", std::to_string(10 * k + d)},
                                                {"solver.mc_samples", "512"},
                                                {"solver.burn_in", "64"}});
      const Environment env = make_environment(cfg);
      const auto hook = [&](const RoundInfo& r) {
        const Eigen::VectorXd& q = *r.query;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& x : env.centers()) best = std::max(best, q.dot(x));
        const double loss = best - q.dot(env.centers()[r.guess]);
        if (r.guess == r.truth) {
          if (loss != 0.0 || r.loss != 0.0) ++violations;
          return;
        }
        ++mistakes;
        worst = std::max(worst, loss - r.bound);
        if (loss > r.bound + 1e-9 || std::abs(loss - r.loss) > 1e-12) ++violations;
      };
      run_experiment(cfg, hook);
      ++episodes;
    }
  }
  return {violations == 0, fmt("episodes=%ld mistakes=%ld violations=%ld max(loss-bound)=%.3g", episodes, mistakes,
                               violations, worst)};
}

Outcome plateau() {
  double early = 0.0, late = 0.0;
  const int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    const ExperimentConfig cfg = config_from({{"labels", "4"},
                                              {"dimension", "3"},
                                              {"rounds", "20000"},
                                              {"seed", std::to_string(s)},
                                              {"adversary", "adaptive_width"},
                                              {"solver.mc_samples", "512"},
                                              {"solver.burn_in", "64"}});
    const RunResult r = run_experiment(cfg);
    early += r.ledger.loss_between(0, 10000) / seeds;
    late += r.ledger.loss_between(10000, 20000) / seeds;
  }
  const double ratio = early > 0.0 ? late / early : std::numeric_limits<double>::infinity();
  return {ratio <= 0.05, fmt("mean_loss(0,1e4]=%.4g mean_loss(1e4,2e4]=%.4g ratio=%.4g bound=0.05", early, late, ratio)};
}

Outcome volume() {
  const auto ratios = volume_ratios(50, 50000, 7);
  long fails = 0;
  double worst = 0.0;
  for (const auto& r : ratios) {
    worst = std::max(worst, r.ratio - 3.0 * r.std_error);
    if (r.ratio > 0.75 + 3.0 * r.std_error) ++fails;
  }
  return {ratios.size() == 50 && fails == 0,
          fmt("mistakes=%zu failures=%ld max(ratio-3se)=%.4g bound=0.75", ratios.size(), fails, worst)};
}

Outcome margin() {
  long late_mistakes = 0, identity_failures = 0, total_mistakes = 0;
  long last = 0;
  for (int s = 1; s <= 10; ++s) {
    const ExperimentConfig cfg = config_from({{"labels", "2"},
                                              {"dimension", "3"},
                                              {"rounds", "20000"},
                                              {"seed", std::to_string(s)},
                                              {"adversary", "margin"},
                                              {"adversary.gamma", "0.01"},
                                              {"report.gamma", "0.01"}});
    const RunResult r = run_experiment(cfg);
    long robust = 0;
    for (const auto& rec : r.ledger.records()) {
      if (!rec.mistake) continue;
      ++total_mistakes;
      last = std::max(last, rec.round);
      if (rec.round > 15000) ++late_mistakes;
      robust += rec.robust_mistake;
    }
    if (!(0.01 * static_cast<double>(robust) <= r.ledger.total_loss())) ++identity_failures;
  }
  return {late_mistakes == 0 && identity_failures == 0,
          fmt("runs=10 mistakes=%ld last_mistake_round=%ld final_quarter_mistakes=%ld identity_failures=%ld",
              total_mistakes, last, late_mistakes, identity_failures)};
}

Outcome containment() {
  Eigen::VectorXd x1(1), x2(1);
  x1 << -0.3;
  x2 << 0.4;
  const ContainmentStats st = containment_run(desk_multiscale_options(0.7), x1, x2, 2000, 9);
  return {st.rounds == 2000 && st.violations == 0,
          fmt("rounds=%ld scales=%d violating_rounds=%ld worst_violation=%.3g", st.rounds, st.scales, st.violations,
              st.worst)};
}

Outcome lower_bound() {
  const Eigen::Index d = 6;
  const long steps = 254;
  const double eps = std::pow(256.0, -1.0 / 4.0);
  long packing_failures = 0, floor_failures = 0, short_runs = 0;
  double min_dist = std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  double mean_loss = 0.0;
  for (int s = 0; s < 20; ++s) {
    const std::uint64_t seed = derive_seed(1000, s);
    RandomPlayer player(2, derive_seed(seed, 1));
    const LowerBoundReport rep = run_lowerbound_episode(player, d, steps, seed);
    if (static_cast<long>(rep.points.size()) != steps + 2 || std::abs(rep.epsilon - eps) > 1e-15) ++short_runs;
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const double dist = (rep.points[i] - rep.points[j]).norm();
        min_dist = std::min(min_dist, dist);
        if (dist < eps) ++packing_failures;
      }
    for (const auto& r : rep.ledger.records())
      if (r.mistake && r.loss < eps * eps / 2.0 - 1e-9) ++floor_failures;
    min_margin = std::min(min_margin, rep.min_separation_margin);
    mean_loss += rep.ledger.total_loss() / 20.0;
  }
  const bool ok = short_runs == 0 && packing_failures == 0 && floor_failures == 0 && mean_loss >= 3.0;
  return {ok, fmt("epsilon=%.6g min_distance=%.6g packing_failures=%ld floor_failures=%ld mean_random_loss=%.4g "
                  "bound=3.0 min_separation_margin=%.3g",
                  eps, min_dist, packing_failures, floor_failures, mean_loss, min_margin)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("wall_time=", 0) != 0) out += line + "\n";
  return out;
}

Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "nnpart_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::string> configs = {
      "labels=3\ndimension=2\nrounds=300\nadversary=adaptive_width\nsolver.mc_samples=512\nsolver.burn_in=64\n",
      "metric=l2\nlabels=3\ndimension=2\nrounds=300\nseed=4\n",
      "metric=lp\np=4\nlabels=2\ndimension=2\nrounds=200\nseed=5\n",
      "labels=2\ndimension=3\nrounds=300\nadversary=margin\nadversary.gamma=0.05\nreport.gamma=0.05\n",
  };
  long differing = 0, errors = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::string outputs[2][2];
    const fs::path cfg = dir / ("run" + std::to_string(c) + ".cfg");
    const fs::path ledger = dir / ("ledger" + std::to_string(c) + ".csv");
    const fs::path summary = dir / ("summary" + std::to_string(c) + ".txt");
    std::ofstream(cfg) << configs[c] << "output.ledger=" << ledger.string() << "\noutput.summary=" << summary.string()
                       << "\n";
    for (int rep = 0; rep < 2; ++rep) {
      fs::remove(ledger);
      fs::remove(summary);
      const std::string cmd = "\"" + cli + "\" run \"" + cfg.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) ++errors;
      outputs[rep][0] = slurp(ledger);
      outputs[rep][1] = without_wall_time(slurp(summary));
    }
    if (outputs[0][0].empty() || outputs[0][0] != outputs[1][0] || outputs[0][1] != outputs[1][1]) ++differing;
  }
  fs::remove_all(dir);
  return {differing == 0 && errors == 0,
          fmt("configs=%zu differing=%ld failed_runs=%ld (summary wall_time excluded)", configs.size(), differing, errors)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to nnpart> [criterion ids, comma-separated]\n";
    return 2;
  }
  const std::string cli = argv[1];
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "even_p_kernel_exactness", 1.0, even_p_exactness},
      {2, "general_p_kernel_bound", 30.0, general_p_bound},
      {3, "taylor_remainder", 10.0, taylor_remainder},
      {4, "distribution_lp_feasibility", 0.0, distribution_lp},
      {5, "per_mistake_domination", 0.0, domination},
      {6, "loss_plateau", 0.0, plateau},
      {7, "volume_decrease", 0.0, volume},
      {8, "margin_mistake_bound", 0.0, margin},
      {9, "multiscale_truth_containment", 0.0, containment},
      {10, "lower_bound_adversary", 0.0, lower_bound},
      {11, "cli_determinism", 0.0, [&] { return determinism(cli); }},
  };
  std::vector<int> only;
  if (argc > 2) {
    std::istringstream ids(argv[2]);
    for (std::string id; std::getline(ids, id, ',');) only.push_back(std::stoi(id));
  }
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += fmt(" time_limit=%gs", c.time_limit);
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail
              << fmt(" time=%.1fs", secs) << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
