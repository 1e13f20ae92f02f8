#include "nnpart/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nnpart/errors.hpp"
#include "nnpart/ledger.hpp"
#include "nnpart/multiscale.hpp"
#include "nnpart/pairwise.hpp"

namespace nnpart {

namespace {

bool even_integer(double p) {
  const double r = std::round(p);
  return std::abs(p - r) < 1e-12 && static_cast<long>(r) % 2 == 0;
}

bool uses_multiscale(const ExperimentConfig& cfg) { return cfg.metric == Metric::Lp && !even_integer(cfg.p); }

std::string kv_text(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

void apply_seed_override(ExperimentConfig& cfg) {
  if (const char* s = std::getenv("NNPART_SEED"); s && *s) cfg.set("seed", s);
}

Environment make_environment(const ExperimentConfig& cfg) {
  std::vector<Eigen::VectorXd> centers;
  if (auto c = cfg.explicit_centers()) {
    centers = std::move(*c);
  } else {
    const double sep = uses_multiscale(cfg) ? cfg.delta : 0.0;
    centers = random_centers(cfg.labels, cfg.dimension, derive_seed(cfg.seed, 1), sep, cfg.p);
  }
  const double alpha = cfg.metric == Metric::InnerProduct ? cfg.alpha : 1.0;
  Environment env(cfg.metric, std::move(centers), cfg.p, alpha);
  if (uses_multiscale(cfg) && env.separation() < cfg.delta - 1e-12)
    throw ConfigError("centers are closer than delta in the p-norm");
  return env;
}

std::unique_ptr<Player> make_player(const ExperimentConfig& cfg, const Environment& env) {
  if (cfg.learner == "random") return std::make_unique<RandomPlayer>(cfg.labels, derive_seed(cfg.seed, 4));
  const QuantileOptions quantile{static_cast<std::size_t>(cfg.mc_samples), static_cast<std::size_t>(cfg.burn_in)};
  SubLearnerFactory factory;
  QueryMap map;
  if (uses_multiscale(cfg)) {
    MultiscaleOptions opt;
    opt.p = cfg.p;
    opt.d = cfg.dimension;
    opt.separation = cfg.delta;
    opt.c_scale = cfg.c_scale;
    opt.selection_constant = cfg.selection_constant;
    opt.slack_constant = cfg.slack_constant;
    opt.i_cap = cfg.i_cap;
    opt.max_lifted_dim = cfg.max_lifted_dim;
    opt.sampling = quantile;
    opt.validate();
    map = make_query_map(Metric::InnerProduct, cfg.p, cfg.dimension);
    const std::uint64_t seed = cfg.seed;
    factory = [opt, seed](int i, int j) {
      return std::make_unique<MultiscaleLearner>(opt, derive_seed(seed, 3, static_cast<std::uint64_t>(i),
                                                                  static_cast<std::uint64_t>(j)));
    };
  } else {
    map = make_query_map(cfg.metric, cfg.p, cfg.dimension);
    const double alpha = cfg.metric == Metric::InnerProduct ? env.alpha() : map.alpha;
    ScaleSchedule schedule = ScaleSchedule::for_horizon(map.learner_dim, alpha, cfg.rounds, cfg.i_min);
    if (cfg.i_max) schedule.i_max = *cfg.i_max;
    schedule.validate();
    const std::uint64_t seed = cfg.seed;
    factory = [schedule, quantile, seed](int i, int j) {
      return std::make_unique<PairwiseLearner>(schedule, quantile,
                                               derive_seed(seed, 3, static_cast<std::uint64_t>(i),
                                                           static_cast<std::uint64_t>(j)));
    };
  }
  auto player = std::make_unique<ReductionPlayer>(cfg.labels, std::move(map), factory, derive_seed(cfg.seed, 4));
  LpOptions lp;
  lp.feasibility_tol = cfg.lp_tolerance;
  player->learner().set_lp_options(lp);
  return player;
}

std::unique_ptr<QuerySource> make_source(const ExperimentConfig& cfg, const Environment& env) {
  const std::uint64_t seed = derive_seed(cfg.seed, 2);
  if (cfg.adversary == "uniform_ball" || (cfg.adversary == "margin" && cfg.adversary_gamma == 0.0))
    return std::make_unique<UniformBallSource>(cfg.dimension, seed);
  if (cfg.adversary == "margin")
    return std::make_unique<ListSource>(margin_stream(env, cfg.adversary_gamma, cfg.rounds, seed));
  if (cfg.adversary == "adaptive_width")
    return std::make_unique<AdaptiveSource>(cfg.dimension, seed, cfg.adversary_candidates);
  if (cfg.adversary == "replay") {
    auto queries = read_replay(cfg.replay_file, cfg.dimension);
    if (static_cast<long>(queries.size()) < cfg.rounds)
      throw ConfigError("replay file holds fewer queries than rounds");
    return std::make_unique<ListSource>(std::move(queries));
  }
  throw ConfigError("adversary '" + cfg.adversary + "' has no query source");
}

RunResult run_experiment(const ExperimentConfig& cfg, const RoundHook& hook) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  if (cfg.adversary == "lowerbound") {
    if (cfg.labels != 2) throw ConfigError("lowerbound adversary needs labels=2");
    if (cfg.metric != Metric::InnerProduct) throw ConfigError("lowerbound adversary needs metric=inner_product");
    if (cfg.dimension < 5) throw ConfigError("lowerbound adversary needs dimension >= 5");
    // Centers only fix the learner's label count; losses come from the regions.
    Environment env(cfg.metric, {Eigen::VectorXd::Zero(cfg.dimension), Eigen::VectorXd::Zero(cfg.dimension)});
    auto player = make_player(cfg, env);
    result.ledger = run_lowerbound_episode(*player, cfg.dimension, cfg.rounds, derive_seed(cfg.seed, 2)).ledger;
  } else {
    const Environment env = make_environment(cfg);
    auto player = make_player(cfg, env);
    auto source = make_source(cfg, env);
    result.ledger = run_episode(*player, env, *source, cfg.rounds, cfg.report_gamma, hook);
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<std::pair<std::string, std::string>> summary_entries(const ExperimentConfig& cfg,
                                                                 const RunResult& result) {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"total_loss", format_number(result.ledger.total_loss())},
      {"mistakes", std::to_string(result.ledger.mistakes())},
      {"robust_mistakes", std::to_string(result.ledger.robust_mistakes())},
      {"rounds", std::to_string(result.ledger.rounds())},
      {"wall_time", format_number(result.wall_time)},
      {"seed", std::to_string(cfg.seed)},
  };
  for (const auto& [k, v] : cfg.effective()) kv.emplace_back("config." + k, v);
  return kv;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

int cmd_run(const std::string& config_path) {
  return guarded([&] {
    ExperimentConfig cfg = load_config(config_path);
    apply_seed_override(cfg);
    cfg.validate();
    const RunResult r = run_experiment(cfg);
    std::ostringstream csv;
    r.ledger.write_csv(csv);
    write_file_atomic(cfg.ledger_path, csv.str());
    write_file_atomic(cfg.summary_path, kv_text(summary_entries(cfg, r)));
    std::cout << "total_loss=" << format_number(r.ledger.total_loss()) << " mistakes=" << r.ledger.mistakes()
              << " rounds=" << r.ledger.rounds() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const std::string& config_path) {
  return guarded([&] {
    ExperimentConfig base = load_config(config_path);
    apply_seed_override(base);

    std::vector<std::string> header;
    for (const auto& [k, v] : base.effective()) header.push_back(k);
    for (const char* k : {"status", "total_loss", "mistakes", "robust_mistakes", "rounds", "wall_time"})
      header.emplace_back(k);

    // Cartesian product in file order, last axis fastest. An axis with no
    // values empties the grid.
    std::size_t cells = 1;
    for (const auto& [axis, values] : base.grid) cells *= values.size();

    std::ostringstream csv;
    for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
    csv << "\n";

    std::size_t ok = 0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      ExperimentConfig cfg = base;
      std::size_t rest = cell;
      for (auto it = base.grid.rbegin(); it != base.grid.rend(); ++it) {
        cfg.set(it->first, it->second[rest % it->second.size()]);
        rest /= it->second.size();
      }
      std::string status = "ok";
      RunResult r;
      try {
        r = run_experiment(cfg);
        ++ok;
      } catch (const std::exception& e) {
        status = std::string("error: ") + e.what();
      }
      std::vector<std::string> row;
      for (const auto& [k, v] : cfg.effective()) row.push_back(v);
      row.push_back(status);
      const bool good = status == "ok";
      row.push_back(good ? format_number(r.ledger.total_loss()) : "");
      row.push_back(good ? std::to_string(r.ledger.mistakes()) : "");
      row.push_back(good ? std::to_string(r.ledger.robust_mistakes()) : "");
      row.push_back(good ? std::to_string(r.ledger.rounds()) : "");
      row.push_back(good ? format_number(r.wall_time) : "");
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << csv_field(row[i]);
      csv << "\n";
    }
    write_file_atomic(base.sweep_path, csv.str());
    std::cout << "cells=" << cells << " ok=" << ok << "\n";
    return (cells == 0 || ok > 0) ? static_cast<int>(kExitOk) : static_cast<int>(kExitRuntime);
  });
}

int cmd_lowerbound(const std::string& config_path) {
  return guarded([&] {
    ExperimentConfig cfg = load_config(config_path);
    apply_seed_override(cfg);
    if (cfg.dimension < 5) throw ConfigError("lowerbound needs dimension >= 5");
    cfg.labels = 2;
    cfg.metric = Metric::InnerProduct;
    cfg.adversary = "lowerbound";
    cfg.validate();

    std::ostringstream csv;
    csv << "replication,seed,total_loss,mistakes,epsilon,loss_floor,min_mistake_loss,min_pairwise_distance,"
           "min_separation_margin\n";
    double sum = 0.0, worst_floor_gap = std::numeric_limits<double>::infinity();
    double min_dist = std::numeric_limits<double>::infinity();
    double eps = 0.0, floor = 0.0;
    const Environment env(cfg.metric, {Eigen::VectorXd::Zero(cfg.dimension), Eigen::VectorXd::Zero(cfg.dimension)});
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < cfg.replications; ++r) {
      ExperimentConfig rc = cfg;
      rc.seed = derive_seed(cfg.seed, 5, static_cast<std::uint64_t>(r));
      auto player = make_player(rc, env);
      const LowerBoundReport rep = run_lowerbound_episode(*player, rc.dimension, rc.rounds, derive_seed(rc.seed, 2));
      eps = rep.epsilon;
      floor = rep.loss_floor;
      sum += rep.ledger.total_loss();
      min_dist = std::min(min_dist, rep.min_pairwise_distance);
      if (rep.ledger.mistakes() > 0) worst_floor_gap = std::min(worst_floor_gap, rep.min_mistake_loss - rep.loss_floor);
      csv << r + 1 << "," << rc.seed << "," << format_number(rep.ledger.total_loss()) << "," << rep.ledger.mistakes()
          << "," << format_number(rep.epsilon) << "," << format_number(rep.loss_floor) << ","
          << format_number(rep.min_mistake_loss) << "," << format_number(rep.min_pairwise_distance) << ","
          << format_number(rep.min_separation_margin) << "\n";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(cfg.ledger_path, csv.str());

    const bool floor_ok = !(worst_floor_gap < -1e-9);
    const bool packing_ok = min_dist >= eps - 1e-12;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"replications", std::to_string(cfg.replications)},
        {"mean_total_loss", format_number(sum / cfg.replications)},
        {"epsilon", format_number(eps)},
        {"loss_floor", format_number(floor)},
        {"min_pairwise_distance", format_number(min_dist)},
        {"floor_holds", floor_ok ? "true" : "false"},
        {"packing_holds", packing_ok ? "true" : "false"},
        {"wall_time", format_number(wall)},
        {"seed", std::to_string(cfg.seed)},
    };
    for (const auto& [k, v] : cfg.effective()) kv.emplace_back("config." + k, v);
    write_file_atomic(cfg.summary_path, kv_text(kv));
    std::cout << "mean_total_loss=" << format_number(sum / cfg.replications) << " epsilon=" << format_number(eps)
              << "\n";
    if (!floor_ok || !packing_ok) {
      std::cerr << "runtime error: lower-bound invariants failed\n";
      return static_cast<int>(kExitRuntime);
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace nnpart
